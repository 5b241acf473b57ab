import pytest
from hypothesis import given
from hypothesis import strategies as st

from tableguard.errors import InvalidInput, InvalidParams
from tableguard.model import (
    EMAIL_ADDRESS,
    GIVEN_NAME_ONLY,
    PERSON_NAME,
    PHONE_NUMBER,
    EntityCluster,
    EntityKind,
    EntitySpan,
    GaussianParams,
    LaplaceParams,
    MaskParams,
    ObfuscationResult,
    Policy,
    PolicyRule,
    Replacement,
    StrategyKind,
    SurrogateParams,
    normalize_value,
)


def make_span(start, end, kind=PERSON_NAME, surface=None, confidence=0.9):
    surface = surface if surface is not None else "x" * (end - start)
    return EntitySpan(start, end, kind, surface, normalize_value(kind, surface), confidence)


class TestEntityKind:
    def test_string_round_trip(self):
        for text in ("person_name", "alphanumeric_id:policy-number", "custom:claim-id"):
            assert str(EntityKind.parse(text)) == text

    def test_custom_requires_label(self):
        with pytest.raises(InvalidParams):
            EntityKind("custom")

    def test_unknown_base_rejected(self):
        with pytest.raises(InvalidParams):
            EntityKind("social_security")

    def test_tag_only_for_ids_and_custom(self):
        with pytest.raises(InvalidParams):
            EntityKind("person_name", "nickname")


class TestEntitySpan:
    def test_rejects_bad_ranges(self):
        with pytest.raises(InvalidInput):
            make_span(5, 5)
        with pytest.raises(InvalidInput):
            make_span(-1, 4)

    def test_rejects_bad_confidence(self):
        with pytest.raises(InvalidInput):
            make_span(0, 3, confidence=1.5)

    @given(st.lists(st.tuples(st.integers(0, 50), st.integers(1, 20)), min_size=2, max_size=20))
    def test_sort_key_total_order(self, raw):
        spans = [make_span(a, a + b) for a, b in raw]
        ordered = sorted(spans, key=EntitySpan.sort_key)
        for left, right in zip(ordered, ordered[1:]):
            assert left.sort_key() <= right.sort_key()

    def test_dict_round_trip(self):
        span = make_span(3, 10, EntityKind("alphanumeric_id", "policy-number"), "AB19010721")
        assert EntitySpan.from_dict(span.to_dict()) == span


class TestNormalizeValue:
    def test_numbers_keep_digits_only(self):
        assert normalize_value(PHONE_NUMBER, "(555) 555-1234") == "5555551234"

    def test_names_casefold_and_collapse(self):
        assert normalize_value(PERSON_NAME, "Homer   Simpson") == "homer simpson"

    def test_numeric_canonical(self):
        from tableguard.model import NUMERIC_VALUE

        assert normalize_value(NUMERIC_VALUE, "12.340") == normalize_value(NUMERIC_VALUE, "12.34")


class TestEntityCluster:
    def test_representative_longest_then_earliest(self):
        full = make_span(10, 23, PERSON_NAME, "Homer Simpson")
        given = make_span(30, 35, GIVEN_NAME_ONLY, "Homer")
        cluster = EntityCluster.from_members((given, full))
        assert cluster.representative == full
        tie_a = make_span(0, 5, GIVEN_NAME_ONLY, "Homer")
        tie_b = make_span(9, 14, GIVEN_NAME_ONLY, "Homer")
        assert EntityCluster.from_members((tie_b, tie_a)).representative == tie_a

    def test_key_stable_under_member_order(self):
        full = make_span(10, 23, PERSON_NAME, "Homer Simpson")
        given = make_span(30, 35, GIVEN_NAME_ONLY, "Homer")
        one = EntityCluster.from_members((full, given))
        two = EntityCluster.from_members((given, full))
        assert one.cluster_key == two.cluster_key == "person_name:homer simpson"

    def test_name_kinds_may_mix_but_others_may_not(self):
        full = make_span(0, 13, PERSON_NAME, "Homer Simpson")
        given = make_span(20, 25, GIVEN_NAME_ONLY, "Homer")
        EntityCluster.from_members((full, given))
        phone = make_span(30, 42, PHONE_NUMBER, "555.192.9277")
        with pytest.raises(InvalidInput):
            EntityCluster.from_members((full, phone))

    def test_empty_rejected(self):
        with pytest.raises(InvalidInput):
            EntityCluster("k", PERSON_NAME, ())

    def test_dict_round_trip(self):
        cluster = EntityCluster.from_members(
            (make_span(0, 13, PERSON_NAME, "Homer Simpson"),), {"era_bucket": "1950s"}
        )
        assert EntityCluster.from_dict(cluster.to_dict()) == cluster


class TestStrategyParams:
    def test_gaussian_rejects_negative_sigma(self):
        with pytest.raises(InvalidParams):
            GaussianParams(-0.1)

    def test_laplace_requires_positive_budget(self):
        with pytest.raises(InvalidParams):
            LaplaceParams(0.0)
        with pytest.raises(InvalidParams):
            LaplaceParams(0.5, 0.0)

    def test_mask_char_single_ascii(self):
        with pytest.raises(InvalidParams):
            MaskParams(mask_char="XX")

    def test_surrogate_band_non_negative(self):
        with pytest.raises(InvalidParams):
            SurrogateParams(rank_band_width=-1)

    def test_default_mask_params_flag(self):
        assert MaskParams().is_default
        assert not MaskParams(keep_prefix=1).is_default


class TestPolicy:
    def make_policy(self):
        return Policy(
            rules=(
                PolicyRule(StrategyKind.MASK, kind=PHONE_NUMBER),
                PolicyRule(StrategyKind.SURROGATE, kind=PERSON_NAME, params=SurrogateParams()),
                PolicyRule(StrategyKind.GAUSSIAN, column="score*", params=GaussianParams(0.1)),
            ),
            seed=42,
        )

    def test_first_match_wins(self):
        policy = Policy(
            rules=(
                PolicyRule(StrategyKind.PASS, kind=PHONE_NUMBER),
                PolicyRule(StrategyKind.MASK, kind=PHONE_NUMBER),
            ),
            seed=1,
        )
        assert policy.match(kind=PHONE_NUMBER).strategy is StrategyKind.PASS

    def test_kind_tag_selector(self):
        policy = Policy(
            rules=(
                PolicyRule(
                    StrategyKind.MASK,
                    kind=EntityKind("alphanumeric_id", "policy-number"),
                    params=MaskParams(keep_prefix=4, keep_suffix=1),
                ),
                PolicyRule(StrategyKind.MASK, kind=EntityKind("alphanumeric_id")),
            ),
            seed=1,
        )
        policy_rule = policy.match(kind=EntityKind("alphanumeric_id", "policy-number"))
        assert policy_rule.params.keep_prefix == 4
        generic = policy.match(kind=EntityKind("alphanumeric_id", "drivers-license"))
        assert generic.params.is_default

    def test_column_glob_selector(self):
        policy = self.make_policy()
        assert policy.match(column="score_2024").strategy is StrategyKind.GAUSSIAN
        assert policy.match(column="name") is None

    def test_rule_needs_exactly_one_selector(self):
        with pytest.raises(InvalidParams):
            PolicyRule(StrategyKind.MASK)
        with pytest.raises(InvalidParams):
            PolicyRule(StrategyKind.MASK, kind=PHONE_NUMBER, column="phone")

    def test_seed_must_fit_u64(self):
        with pytest.raises(InvalidParams):
            Policy(rules=(), seed=-1)
        with pytest.raises(InvalidParams):
            Policy(rules=(), seed=1 << 64)

    def test_custom_labels_unique(self):
        rule = PolicyRule(StrategyKind.MASK, kind=EntityKind("custom", "claim"))
        with pytest.raises(InvalidParams):
            Policy(rules=(rule, rule), seed=1)

    def test_dict_round_trip(self):
        policy = self.make_policy()
        assert Policy.from_dict(policy.to_dict()) == policy

    def test_sanitized_dict_omits_seed(self):
        assert "seed" not in self.make_policy().to_dict(include_seed=False)

    def test_covers_excludes_pass_rules(self):
        policy = Policy(rules=(PolicyRule(StrategyKind.PASS, kind=PHONE_NUMBER),), seed=1)
        assert not policy.covers(PHONE_NUMBER)


class TestObfuscationResult:
    def test_rejects_overlapping_replacements(self):
        a = Replacement(make_span(0, 10), "x", StrategyKind.MASK)
        b = Replacement(make_span(5, 12), "y", StrategyKind.MASK)
        with pytest.raises(InvalidInput):
            ObfuscationResult("text", (a, b), ())

    def test_round_trip_dict(self):
        a = Replacement(make_span(0, 10, EMAIL_ADDRESS, "a@b.org", 1.0), "x@x.org", StrategyKind.MASK)
        result = ObfuscationResult("text", (a,), ())
        d = result.to_dict()
        assert Replacement.from_dict(d["replacements"][0]) == a
