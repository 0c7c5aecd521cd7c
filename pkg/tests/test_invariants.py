"""Invariant vectors on the worked germs, plus the closed-form batteries.

The corank two quintic and the two parametrized families have every
number pinned.  Quasi-homogeneous closed forms and the homogeneous
corank one formulas are cross-checked against the computed reports, so
the direct route and the formula route validate each other.
"""

import pytest

from germkit.errors import GenericityError, IntegrityError, NotFinitelyDetermined
from germkit.germs import WeightData, detect_quasihomogeneous, parse_germ
from germkit.groebner import ResourceLimits
from germkit.invariants import (
    REPORT_FIELDS,
    coprime_family_closed_forms,
    generic_plane_sections,
    homogeneous_corank1_closed_forms,
    invariant_report,
    mond_formulas,
)

CROSSCAP = "(x, y^2, x*y)"
QUARTIC_SEXTIC = "(x, y^4, x^5*y - 5*x^3*y^3 + 4*x*y^5 + y^6)"
CUBIC_QUINTIC = "(x^3, y^5, x^2 - x*y + y^2)"


@pytest.fixture(scope="module")
def quartic_report():
    return invariant_report(parse_germ(QUARTIC_SEXTIC))


@pytest.fixture(scope="module")
def cubic_report():
    return invariant_report(parse_germ(CUBIC_QUINTIC))


class TestReportVectors:
    def test_crosscap(self):
        r = invariant_report(parse_germ(CROSSCAP))
        assert r.as_dict() == {
            "mu_D": 0, "C": 1, "T": 0, "mu_D2": 0, "mu_D2_mod_S2": 0,
            "mu_fD": 0, "m0_image": 2, "m1_image": 1, "mu_Ytilde": 0,
            "mu1": 2, "m0_fD": 1, "J": 0,
        }

    def test_corank_two_quintic(self, report235):
        assert report235.as_dict() == {
            "mu_D": 441, "C": 14, "T": 56, "mu_D2": 105,
            "mu_D2_mod_S2": 46, "mu_fD": 270, "m0_image": 6,
            "m1_image": 7, "mu_Ytilde": 2, "mu1": 46, "m0_fD": 22,
            "J": 67,
        }

    def test_quartic_sextic(self, quartic_report):
        assert quartic_report.as_dict() == {
            "mu_D": 196, "C": 15, "T": 20, "mu_D2": 76,
            "mu_D2_mod_S2": 31, "mu_fD": 111, "m0_image": 4,
            "m1_image": 3, "mu_Ytilde": 0, "mu1": 18, "m0_fD": 9,
            "J": 39,
        }

    def test_cubic_quintic(self, cubic_report):
        assert cubic_report.as_dict() == {
            "mu_D": 441, "C": 14, "T": 56, "mu_D2": 105,
            "mu_D2_mod_S2": 46, "mu_fD": 270, "m0_image": 6,
            "m1_image": 6, "mu_Ytilde": 1, "mu1": 47, "m0_fD": 23,
            "J": 68,
        }

    def test_provenance_split(self, quartic_report):
        direct = {k for k, v in quartic_report.provenance.items()
                  if v == "direct"}
        assert direct == {"mu_D", "C", "T", "m0_image", "mu_Ytilde", "mu1"}
        assert set(quartic_report.provenance) == set(REPORT_FIELDS)

    def test_non_negative(self, quartic_report, cubic_report, report235):
        for r in (quartic_report, cubic_report, report235):
            assert all(v >= 0 for v in r.as_dict().values())


class TestPlaneSections:
    def test_seed_reproducible(self):
        f = parse_germ(CROSSCAP)
        a = generic_plane_sections(f, seed=7)
        b = generic_plane_sections(f, seed=7)
        assert a[:2] == b[:2] == (0, 2)
        assert [s.coefficients for s in a[2]] == [s.coefficients for s in b[2]]

    def test_corank_one_upstairs_smooth(self, quartic_report):
        # a corank one germ has a coordinate component, so a generic
        # linear combination is regular and the section upstairs smooth
        assert quartic_report.mu_Ytilde == 0

    def test_minimum_attained_twice(self, report235):
        values = [s.mu_Ytilde for s in report235.plane_samples]
        assert values.count(min(values)) >= 2
        values = [s.mu_Y for s in report235.plane_samples]
        assert values.count(min(values)) >= 2

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            generic_plane_sections(parse_germ(CROSSCAP), n_samples=1)


class TestQuasiHomogeneousFormulas:
    def test_against_direct_reports(self, quartic_report, cubic_report,
                                    report235):
        for germ_text, r in [(QUARTIC_SEXTIC, quartic_report),
                             (CUBIC_QUINTIC, cubic_report)]:
            w = detect_quasihomogeneous(parse_germ(germ_text))
            assert w is not None
            assert mond_formulas(w) == (r.C, r.T, r.mu_D)
        w = detect_quasihomogeneous(parse_germ(
            "(x^2, x^2*y + x*y^2 + y^3, x^5 + y^5)"))
        assert mond_formulas(w) == (report235.C, report235.T, report235.mu_D)

    def test_crosscap_weights(self):
        assert mond_formulas(WeightData((1, 1), (1, 2, 2))) == (1, 0, 0)

    def test_weight_symmetry(self):
        assert mond_formulas(WeightData((1, 1), (3, 5, 2))) == \
            mond_formulas(WeightData((1, 1), (2, 3, 5)))

    def test_unrealizable_weights_abort(self):
        with pytest.raises(IntegrityError):
            mond_formulas(WeightData((2, 3), (4, 5, 6)))

    def test_positive_weights_required(self):
        with pytest.raises(ValueError):
            mond_formulas(WeightData((0, 1), (1, 2, 2)))


class TestHomogeneousClosedForms:
    def test_both_even_keeps_a_fold(self):
        assert homogeneous_corank1_closed_forms(4, 6) == \
            (15, 9, 18, 39, "fold")
        assert homogeneous_corank1_closed_forms(4, 10)[0:2] == (27, 15)

    def test_identification_case(self):
        assert homogeneous_corank1_closed_forms(2, 3) == \
            (2, 1, 2, 0, "identification")

    def test_matches_quartic_report(self, quartic_report):
        d, m0_fD, mu1, J, case = homogeneous_corank1_closed_forms(4, 6)
        assert case == "fold"
        assert (m0_fD, mu1, J) == (quartic_report.m0_fD,
                                   quartic_report.mu1, quartic_report.J)

    def test_branch_parity(self):
        # d is odd exactly when both degrees are even
        for n in range(2, 8):
            for m in range(n, 10):
                d = homogeneous_corank1_closed_forms(n, m)[0]
                assert (d % 2 == 1) == (n % 2 == 0 and m % 2 == 0)

    def test_rejects_bad_degrees(self):
        with pytest.raises(ValueError):
            homogeneous_corank1_closed_forms(1, 5)


class TestCoprimeClosedForms:
    def test_values(self):
        assert coprime_family_closed_forms(2, 3, 5) == (22, 22, 46, 2, 1)
        assert coprime_family_closed_forms(3, 4, 5) == (50, 75, 156, 6, 4)

    def test_branch_count_even(self):
        for nmk in [(2, 3, 5), (2, 5, 7), (3, 4, 5), (3, 5, 7)]:
            assert coprime_family_closed_forms(*nmk)[0] % 2 == 0

    def test_rejects_common_factor(self):
        with pytest.raises(ValueError):
            coprime_family_closed_forms(2, 4, 5)
        with pytest.raises(ValueError):
            coprime_family_closed_forms(3, 2, 5)


class TestRejection:
    def test_immersion(self):
        with pytest.raises(ValueError, match="immersive"):
            invariant_report(parse_germ("(x, y, x^2 + y^3)"))

    def test_nonreduced_double_curve(self):
        with pytest.raises(NotFinitelyDetermined, match="not reduced"):
            invariant_report(parse_germ("(x, y^2, x^2*y)"))

    def test_two_to_one_cover(self):
        with pytest.raises(NotFinitelyDetermined):
            invariant_report(parse_germ("(x, y^2, 0)"))
