#!/usr/bin/env python3
"""Regenerate the bundled desk-scale gazetteer fixture.

Emits src/tableguard/data/gazetteer.tsv: roughly 2,000 first names and
2,000 last names with gender, per-(part, gender) popularity rank, and a
decade bucket for first names. Curated common names take the top ranks;
deterministic phonotactic fillers pad the tail so rank-band queries around
popular names always land on real names. Output is fully deterministic.

Run from the repository root:  python scripts/make_gazetteer.py
"""

from __future__ import annotations

import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "tableguard" / "data" / "gazetteer.tsv"

# Pronouns, articles, and sentence-lead words must never appear here: the
# recognizer treats any capitalized first-table hit as a given name.
MALE = """
james john robert michael william david richard joseph thomas charles
christopher daniel matthew anthony donald steven paul andrew joshua kenneth
kevin brian george edward ronald timothy jason jeffrey ryan jacob gary
nicholas eric jonathan stephen larry justin scott brandon benjamin samuel
gregory frank alexander raymond patrick jack dennis jerry tyler aaron jose
adam nathan henry douglas zachary peter kyle walter ethan jeremy harold
keith christian roger noah gerald carl terry sean austin arthur lawrence
jesse dylan bryan joe jordan billy bruce albert willie gabriel logan alan
juan wayne roy ralph randy eugene vincent russell elijah louis bobby philip
johnny homer bradley herbert frederick edwin clarence ernest stanley norman
leonard earl claude hugh oscar lester milton floyd leo theodore clifford
vernon chester martin lloyd gordon leroy herman arnold mark dale glenn
howard fred francis clyde cecil alfred bernard elmer ray melvin marvin
stuart wallace sidney morris irving harvey wilbur roland dean duane gilbert
warren emil rex otis rufus sylvester virgil wade grant abraham isaac levi
caleb owen luke miles felix silas jasper amos emmett everett harlan hiram
jonah ezra gideon abel elias enoch ira jesus alonzo aurelio armando alberto
alfredo andres angel antonio arturo carlos cesar diego eduardo emilio
enrique ernesto fernando francisco gerardo gilberto gustavo hector hugo
ignacio ismael javier jorge julio lorenzo luis manuel marco mario miguel
omar oswaldo pablo pedro rafael ramon raul ricardo roberto rodolfo rogelio
ruben salvador santiago sergio tomas vicente victor wei ming jun takashi
hiroshi kenji akira satoshi yusuke kazuo dmitri ivan sergei mikhail nikolai
vladimir boris anton pavel viktor ahmed ali hassan omar2 khalid tariq samir
rashid kwame kofi chidi emeka olu tunde dante cyrus dexter edgar edmund
fletcher franklin graham harrison hayden hudson landon lincoln maxwell
nolan oliver parker preston quentin reid sawyer spencer tucker wesley
weston xavier zane barrett bennett brent brody cameron carson chad chase
clay cody colin conner craig curtis damian darius darren derek devin drew
dustin dwayne evan gavin grady heath ian jared jarrod joel kent kirk lance
lucas malcolm mason micah mitchell neal perry phillip quinn reuben rhett
ross seth shane shawn stefan toby travis trent trevor troy tyrone vance
wendell zachariah brett byron cedric clinton dallas damon denzel desmond
dominic donovan earnest efrain elliott emanuel emery ervin esteban fabian
forrest garrett garry geoffrey gerard german gino giovanni guillermo
hank harley harris hershel hollis horace hubert humberto irvin irwin
isaias issac jackson jaime jamal jamie jarred jarvis jayson jeffery
jermaine jerome jerrold jess jessie joaquin jody johnathan johnnie jonas
josef josue judson julian julius

""".split()

FEMALE = """
mary patricia jennifer linda elizabeth barbara susan jessica sarah karen
lisa nancy betty margaret sandra ashley kimberly emily donna michelle
carol amanda dorothy melissa deborah stephanie rebecca sharon laura
cynthia kathleen amy angela shirley anna brenda pamela emma nicole helen
samantha katherine christine debra rachel carolyn janet catherine maria
heather diane ruth julie olivia joyce virginia victoria kelly lauren
christina joan evelyn judith megan andrea cheryl hannah jacqueline martha
gloria teresa ann sara madison frances kathryn janice jean abigail alice
julia judy sophia grace denise amber doris marilyn danielle beverly
isabella theresa diana natalie brittany charlotte marie kayla alexis lori
beth annie mabel edith ethel florence gertrude hazel irene lillian lucille
mildred pauline thelma velma vera viola agnes bernice bertha beulah birdie
blanche clara cora della dollie effie elsie essie estelle etta eula fannie
flora goldie hattie henrietta hilda ida inez iva josephine lena leona
lottie lula mae mamie mattie maude minnie myrtle nellie nettie nora ollie
opal ora pearl rosa sadie sallie stella sybil tillie willa wilma adele
adriana aida aileen aimee alejandra alexandra alicia alina alison allison
alma alyssa amalia amparo anastasia angelica angelina anita annabelle
annette antonia araceli ariana ariel arlene audrey aurora ava barbra
beatrice beatriz belinda bella benita bianca bonnie briana bridget brooke
camila candace carina carissa carla carmen carmella cassandra cassidy
catalina cecelia cecilia celeste celia chelsea chloe cindy claire clarissa
claudia colleen concepcion connie constance consuelo coral corina corinne
courtney cristina crystal daisy dana daphne darlene dawn deanna deirdre
delia delores desiree dina dolores dominique dora doreen eileen elaine
eleanor elena eliza ellen eloise elsa elvira erica erika erin esmeralda
esperanza estella esther eugenia eunice eva evangeline faith felicia fern
fiona flor francesca francine freda frieda gabriela gail gena genevieve
georgia geraldine gina giselle gladys glenda glenna gracie graciela greta
gretchen guadalupe gwen gwendolyn haley harriet heidi hillary hope imelda
imogene india ingrid iris irma isabel ivy jackie jade jana jane janelle
janette janie jasmine jeanette jeanne jeannette jeannie jenna jenny jewel
jill joanna joanne jocelyn jodi jolene josefa josie joy juana juanita
judi juliana juliet kaitlin kara kari karina karla kasey kate
katelyn katie katrina kaye kendra kerri kerry kristen kristi kristin
kristina kristine krystal kylie lacey lana lara larissa latasha latoya
laurel laurie leah leanne leila lela lelia lenora leslie leticia lidia
lila lilia lilly lily linda2 lindsay lindsey liliana lorena loretta lorna
lorraine lourdes lucia luciana lucinda luella luisa lupe luz lydia lynda
lynette lynn mabelle mackenzie madeleine madeline magdalena maggie maisie
mallory mara marcella marcia margarita margie margo marguerite mariah
marian marianne maribel maricela marina marisa marisol marissa marjorie
marlene marta maryann matilda maureen maxine mayra meagan melanie melinda
melody mercedes meredith mia micaela michaela milagros millie mindy
miranda miriam mollie molly monica monique morgan muriel myra nadia
nadine nanette naomi natasha nell nichole nikki nina noelle noemi nola

""".split()

UNISEX = "taylor jordan2 casey riley avery quinn2 rowan skyler emerson finley".split()

LAST = """
smith johnson williams brown jones garcia miller davis rodriguez martinez
hernandez lopez gonzalez wilson anderson thomas taylor moore jackson
martin lee perez thompson white harris sanchez clark ramirez lewis
robinson walker young allen king wright scott torres nguyen hill flores
green adams nelson baker hall rivera campbell mitchell carter roberts
gomez phillips evans turner diaz parker cruz edwards collins reyes
stewart morris morales murphy cook rogers gutierrez ortiz morgan cooper
peterson bailey reed kelly howard ramos kim cox ward richardson watson
brooks chavez wood james bennett gray mendoza ruiz hughes price alvarez
castillo sanders patel myers long ross foster jimenez simpson buchman
edison powell jenkins perry russell sullivan bell coleman butler
henderson barnes gonzales fisher vasquez salazar lawson hansen castro
dunn hart bradley knight ferguson rose stone hawkins dunlap boyd mills
warren fox rice schmidt garza daniels burke snyder santos porter hunter
gordon mason hicks crawford olson simmons wagner dixon shaw wheeler
webb greene kennedy franklin spencer burns arnold reynolds elliott
keller hoffman palmer berry matthews newman harper freeman stevens
lane lawrence banks craig fuller chapman weaver lucas holland terry
pearson griffith wells carroll duncan armstrong hudson bowman may
carpenter cole west jordan ryan walsh curtis marsh barker cunningham
todd blair bishop browning burgess calhoun cannon cantrell carlson
carney chambers chandler cherry church clements cobb cochran coffey
conley conner conway copeland cortez costa cote cotton crane crosby
cross dalton daugherty davenport dawson decker dennis dickson dillon
dodson donaldson dorsey dotson doyle drake dudley duffy dyer eaton
ellington ellison emerson2 england english erickson espinoza estes
farley farmer farrell faulkner finch fitzgerald fleming fletcher flynn
forbes frank frazier french frost frye gaines gallagher gallegos galloway
gamble gardner garner garrett garrison gates gentry gibbs gibson gilbert
giles gill gillespie glass glenn goff goodman goodwin graham grant graves
griffin grimes gross guerra guerrero guzman hale haley hamilton hammond
hampton hancock haney hanna hardin harding hardy harmon harrell harrington
harrison hartman harvey hatfield hayden hayes haynes heath hebert hendricks
hendrix henry hensley herman herrera herring hess hester hickman higgins
hinton hobbs hodge hodges hogan holcomb holden holder holloway holman
holmes holt hood hoover hopkins hopper horn horne horton house houston
howe howell hubbard huber hudgins huff huffman hull humphrey hurley hurst
hutchinson hyde ingram irwin2 jacobs jacobson jarvis2 jefferson jennings
jensen jimenez2 joyce2 juarez justice kane kaufman keith2 kemp kendall kent2
kerr key kidd kinney kirby kirk2 kirkland klein knapp knox koch kramer
lamb lambert lancaster landry langley lara2 larsen larson leach leblanc
leon leonard2 lester2 levine levy lindsey2 little livingston lloyd2 locke
logan2 lowe lowery lynch lyons macdonald macias mack madden maddox maldonado
malone mann manning marks marquez marshall martins massey mathews mathis
maxwell2 mayer mayfield maynard mays mcbride mccall mccann mccarthy mcclain
mcclure mcconnell mccormick mccoy mccullough mcdaniel mcdonald mcdowell
mcfarland mcgee mcguire mcintosh mcintyre mckay mckee mckenzie mckinney
mcknight mclaughlin mclean mcmahon mcmillan mcneil mcpherson meadows medina
mejia melendez melton mendez mercado merritt meyer meyers michael2 middleton
miles2 miranda2 mohammed molina monroe montgomery montoya moody moon mooney
moran moreno morin morrison morrow morton moses mosley moss mueller mullen
mullins munoz murray nash navarro neal2 newton nichols nielsen nixon noble
noel norman2 norris norton nunez obrien ochoa oconnor odom odonnell oliver2
olsen oneal oneill orr ortega osborn osborne owen2 owens pace pacheco padilla
page palacios pappas parks parrish parsons pate patrick2 patterson patton
paul2 payne pena pennington peters petersen petty pham phan pierce pittman
pitts pollard poole pope potter potts powers pratt preston2 prince pruitt
pugh quintero raines raley ramsey randall randolph rankin rasmussen ratliff
ray2 raymond2 reeves reid2 reilly rich richard2 richards richmond riddle
riggs rios ritter rivas rivers roach robbins robles rocha rodgers rojas
rollins romano romero rosales rosario rosas rowe rowland roy2 rubio rush
rutledge salas salinas sampson sanford santana santiago2 saunders savage
sawyer2 schaefer schneider schroeder schultz schwartz sellers serrano
sexton shaffer shannon sharp shelton shepard shepherd sheppard sherman
shields short silva sims singleton skinner slater sloan small snow
solis solomon sosa soto sparks spears stafford stanley2 stanton stark
steele stein stephens stephenson stevenson stokes stout strickland
strong stuart2 suarez summers sutton swanson sweeney tanner tate
terrell thornton tillman tobias townsend tran travis2 trevino trujillo
tucker2 turner2 tyler2 underwood valdez valencia valentine vance2 vargas
vaughan vaughn vega velasquez velazquez velez villa villanueva villarreal
vincent2 vinson wade2 waggoner wall wallace2 walls walter2 walters walton
wang ware washington waters weber webster weeks weiss welch werner whitaker
whitehead whitfield whitley whitney wiggins wilcox wiley wilkerson wilkins
wilkinson willis wilson2 winters wise witt wolf wolfe woodard woods wooten
workman wyatt yang yates yoder york2 yu zamora zavala zhang zimmerman zuniga

""".split()

FIRST_ONSETS = """
ad al an ar bel ber bran cal car ced dal dan dar del der dor ed el em er
fal fer gar gral hal jor kel lan lor mal mar mel mer nor or ral ray rol ros
sel tal ter thal ver wil bren cor dav els fen
""".split()

MALE_ENDINGS = """
bert den don dric ford fred gard land ley mond mund ric ton vin win wyn
dan mar son
""".split()

FEMALE_ENDINGS = """
a ana belle da elle ena essa ia iana ina inda issa lyn ora wen ette ine
ara ella
""".split()

LAST_PREFIXES = """
ash bright brook clay cold crest dale fair fern glen hart hay haze high
holt lake lock marsh mill moor north oak ridge rock shad stan thorn west
wick wind green2 elm aster birch briar cedar dray ever fall garn kings
lang low mont
""".split()

LAST_SUFFIXES = """
berg born bourne by cott croft dale2 den field ford2 gate ham hurst land2
leigh ley2 man mere more rick row shaw2 stead stone2 ton2 wall2 ward2 well
wick2 wood2 worth barrow bridge brook2 combe don2 grove holm mead minster
""".split()

ERAS = [f"{decade}s" for decade in range(1940, 2010, 10)]


def _clean(words: list[str]) -> list[str]:
    # Numeric suffixes mark intentional near-duplicates across lists; strip
    # them and drop anything that collides after stripping.
    seen: set[str] = set()
    out = []
    for w in words:
        w = w.rstrip("0123456789")
        if w and w not in seen:
            seen.add(w)
            out.append(w)
    return out


def _synth(onsets: list[str], endings: list[str], taken: set[str], want: int,
           rng: random.Random) -> list[str]:
    combos = [o + e for o in onsets for e in endings]
    combos = [c for c in dict.fromkeys(combos) if c.isalpha() and c.isascii() and c not in taken]
    rng.shuffle(combos)
    return combos[:want]


def build_rows() -> list[tuple[str, str, str, int, str]]:
    rng = random.Random(20240801)
    male = _clean(MALE)
    female = _clean(FEMALE)
    unisex = _clean(UNISEX)
    last = _clean(LAST)
    # A name may appear once per part; the unisex list wins collisions.
    male = [n for n in male if n not in unisex]
    female = [n for n in female if n not in unisex]

    taken = set(male) | set(female) | set(unisex)
    male += _synth(_clean(FIRST_ONSETS), _clean(MALE_ENDINGS), taken | set(male), 1000 - len(male), rng)
    female += _synth(_clean(FIRST_ONSETS), _clean(FEMALE_ENDINGS), taken | set(female), 1000 - len(female), rng)
    last += _synth(_clean(LAST_PREFIXES), _clean(LAST_SUFFIXES), set(last), 2000 - len(last), rng)

    rows = []
    for gender, names in (("male", male), ("female", female), ("unisex", unisex)):
        for rank, name in enumerate(names, start=1):
            rows.append((name, "first", gender, rank, rng.choice(ERAS)))
    for rank, name in enumerate(last, start=1):
        rows.append((name, "last", "unknown", rank, "-"))
    return rows


def main() -> None:
    rows = build_rows()
    firsts = sum(1 for r in rows if r[1] == "first")
    lasts = len(rows) - firsts
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", encoding="utf-8") as fh:
        fh.write("name\tpart\tgender\trank\tera\n")
        for name, part, gender, rank, era in rows:
            fh.write(f"{name}\t{part}\t{gender}\t{rank}\t{era}\n")
    print(f"wrote {OUT} ({firsts} first names, {lasts} last names)")


if __name__ == "__main__":
    main()
