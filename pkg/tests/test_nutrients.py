"""Nutrient vector arithmetic and canonical label mapping."""
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from foodcomp.errors import InvalidArgument, UnknownNutrientError
from foodcomp.nutrients import (
    CORE_NUTRIENTS,
    CompletenessMask,
    NutrientVector,
    Source,
    canonical_nutrient_id,
    format_amount,
    nutrient_mapping,
    nv_add,
    nv_scale,
    to_fraction,
)


def nv(**kwargs):
    return NutrientVector({k: to_fraction(v) for k, v in kwargs.items()})


class TestNutrientVector:
    def test_known_is_exactly_values_keys(self):
        v = nv(protein_g=2, iron_mg="0.5")
        assert v.known == {"protein_g", "iron_mg"}

    def test_rejects_negative_amounts(self):
        with pytest.raises(InvalidArgument):
            nv(protein_g=-1)

    def test_rejects_unregistered_ids(self):
        with pytest.raises(InvalidArgument):
            NutrientVector({"unobtainium_g": 1})

    def test_core_set_has_38_nutrients(self):
        assert len(CORE_NUTRIENTS) == 38

    def test_round_trip_dict(self):
        v = nv(protein_g="7/3", energy_kcal=70)
        assert NutrientVector.from_dict(v.to_dict()) == v


class TestScale:
    def test_identity_at_100g(self):
        assert nv_scale(nv(protein_g=2), 100) == nv(protein_g=2)

    def test_zero_grams(self):
        assert nv_scale(nv(protein_g=2), 0) == nv(protein_g=0)

    def test_hand_multiplied_480g(self):
        # 480/100 x {protein 2.0, energy 70} = {protein 9.6, energy 336}
        got = nv_scale(nv(protein_g=2, energy_kcal=70), 480)
        assert got == nv(protein_g="9.6", energy_kcal=336)

    def test_negative_grams_rejected(self):
        with pytest.raises(InvalidArgument):
            nv_scale(nv(protein_g=1), -1)

    def test_known_set_unchanged(self):
        v = nv(protein_g=1, iron_mg=2)
        assert nv_scale(v, 37).known == v.known

    @given(
        a=st.fractions(min_value=0, max_value=10),
        b=st.fractions(min_value=0, max_value=10),
        amount=st.fractions(min_value=0, max_value=1000),
    )
    def test_scaling_composes(self, a, b, amount):
        v = NutrientVector({"protein_g": amount})
        once = nv_scale(v, a * b * 100)
        twice = nv_scale(nv_scale(v, a * 100), b * 100)
        assert once == twice


class TestAdd:
    def test_plain_sum(self):
        assert nv_add(nv(protein_g=1), nv(protein_g=2)) == nv(protein_g=3)

    def test_missing_is_not_zero(self):
        got = nv_add(nv(protein_g=1), NutrientVector({}))
        assert got == nv(protein_g=1)

    def test_union_of_known_sets(self):
        got = nv_add(nv(protein_g=1, iron_mg="0.5"), nv(protein_g=2))
        assert got == nv(protein_g=3, iron_mg="0.5")
        assert got.known == {"protein_g", "iron_mg"}

    @given(
        st.dictionaries(st.sampled_from(CORE_NUTRIENTS[:6]), st.fractions(min_value=0, max_value=100), max_size=4),
        st.dictionaries(st.sampled_from(CORE_NUTRIENTS[:6]), st.fractions(min_value=0, max_value=100), max_size=4),
        st.dictionaries(st.sampled_from(CORE_NUTRIENTS[:6]), st.fractions(min_value=0, max_value=100), max_size=4),
    )
    def test_commutative_and_associative(self, a, b, c):
        va, vb, vc = NutrientVector(a), NutrientVector(b), NutrientVector(c)
        assert nv_add(va, vb) == nv_add(vb, va)
        assert nv_add(nv_add(va, vb), vc) == nv_add(va, nv_add(vb, vc))


class TestCompletenessMask:
    def test_partial_flagging(self):
        m = CompletenessMask.of(nv(protein_g=1, iron_mg="0.5")).merge(
            CompletenessMask.of(nv(protein_g=2))
        )
        assert m.fraction("protein_g") == 1
        assert m.fraction("iron_mg") == Fraction(1, 2)
        assert m.is_partial("iron_mg")
        assert not m.is_partial("protein_g")

    @given(
        st.lists(
            st.dictionaries(st.sampled_from(CORE_NUTRIENTS[:5]), st.just(Fraction(1)), max_size=3),
            min_size=3,
            max_size=3,
        )
    )
    def test_mask_merge_commutative_associative(self, ds):
        ma, mb, mc = (CompletenessMask.of(NutrientVector(d)) for d in ds)
        assert ma.merge(mb) == mb.merge(ma)
        assert ma.merge(mb).merge(mc) == ma.merge(mb.merge(mc))


class TestCanonicalMapping:
    def test_ifct_protein(self):
        assert canonical_nutrient_id(Source.IFCT, "Protein") == "protein_g"

    def test_external_api_protein(self):
        assert canonical_nutrient_id(Source.EXTERNAL_API, "nf_protein") == "protein_g"

    def test_unmapped_label_raises_with_label(self):
        with pytest.raises(UnknownNutrientError) as exc:
            canonical_nutrient_id(Source.INDB, "made-up-label")
        assert exc.value.label == "made-up-label"

    def test_scale_factor_iu_to_ug(self):
        nid, scale = nutrient_mapping(Source.EXTERNAL_API, "nf_vitamin_d_iu")
        assert nid == "vitamin_d_ug"
        assert scale == Fraction(1, 40)

    def test_empty_label_rejected(self):
        with pytest.raises(InvalidArgument):
            canonical_nutrient_id(Source.IFCT, "")


class TestFormatting:
    def test_round_half_even(self):
        assert format_amount(Fraction("2.345")) == "2.34"
        assert format_amount(Fraction("2.355")) == "2.36"
        assert format_amount(Fraction("2.5")) == "2.5"
        assert format_amount(Fraction(3)) == "3"
