from math import gcd

import pytest

from ntl.abelian import AbelianInvariants
from ntl.catalog import catalog_lookup, realize_name
from ntl.errors import (BudgetExceeded, CapExceeded, Incompatible,
                        InternalInconsistency, NotActionHomomorphism,
                        NotAutomorphism)
from ntl.coset import EnumerationBudget
from ntl.groups import (closure, derived_subgroup,
                        subgroup_abelian_invariants)
from ntl.parsing import parse_action
from ntl.tensor import (abelian_tensor_oracle, build_eta, build_nu,
                        conjugation_pair, delta, delta_tilde, j2, kappa,
                        tensor_direct, tensor_set, trivial_pair,
                        validate_compatibility)

SMALL = ["C1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "D4", "Q8"]


def cyc(n):
    return realize_name(f"C{n}")


class TestCompatibility:
    @pytest.mark.parametrize("a,b", [("C2", "C3"), ("C4", "C6"),
                                     ("S3", "C2"), ("Q8", "D4")])
    def test_trivial_actions_always_compatible(self, a, b):
        pair = trivial_pair(realize_name(a), realize_name(b))
        assert pair.g.order == realize_name(a).order

    @pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4"])
    def test_conjugation_compatible(self, name):
        g = realize_name(name)
        pair = conjugation_pair(g)
        x, y = 1, 2
        assert int(pair.g_on_h[x, y]) == g.conj(y, x)

    def test_mutual_squaring_on_c5_incompatible(self):
        g = cyc(5)
        p = catalog_lookup("C5").presentation
        spec = parse_action(
            "action sq { from: C5; to: C5; a => (a -> a^2); }", p, p)
        with pytest.raises(Incompatible) as err:
            validate_compatibility(g, g, spec, spec)
        # first violating triple is (a, b, a) in element indices
        assert err.value.witness == (1, 1, 1)

    def test_non_automorphism_rejected(self):
        c4 = realize_name("C4")
        c2 = realize_name("C2")
        p4 = catalog_lookup("C4").presentation
        p2 = catalog_lookup("C2").presentation
        spec = parse_action(
            "action sq { from: C2; to: C4; a => (a -> a^2); }", p2, p4)
        back = parse_action(
            "action tr { from: C4; to: C2; a => (a -> a); }", p4, p2)
        with pytest.raises(NotAutomorphism):
            validate_compatibility(c2, c4, spec, back)

    def test_non_homomorphic_action_rejected(self):
        # squaring is an automorphism of C5 but a -> squaring is not a
        # C2-action; both compatibility identities nevertheless hold.
        c2, c5 = realize_name("C2"), cyc(5)
        p2 = catalog_lookup("C2").presentation
        p5 = catalog_lookup("C5").presentation
        spec = parse_action(
            "action sq { from: C2; to: C5; a => (a -> a^2); }", p2, p5)
        back = parse_action(
            "action tr { from: C5; to: C2; a => (a -> a); }", p5, p2)
        with pytest.raises(NotActionHomomorphism):
            validate_compatibility(c2, c5, spec, back)


class TestBuildEta:
    def test_eta_of_trivial_pair(self):
        e = build_eta(trivial_pair(cyc(1), cyc(1)))
        assert e.eta.order == 1
        assert e.tensor.order == 1

    def test_nu_c2(self):
        e = build_nu(cyc(2))
        assert e.eta.order == 8
        assert e.tensor.order == 2

    def test_nu_c3(self):
        e = build_nu(cyc(3))
        assert e.eta.order == 27
        assert e.tensor.order == 3

    def test_eta_c2_c3_trivial(self):
        e = build_eta(trivial_pair(cyc(2), cyc(3)))
        assert e.eta.order == 6
        assert e.tensor.order == 1

    def test_nu_s3_decomposition_and_cross_route(self):
        s3 = realize_name("S3")
        e = build_nu(s3)
        assert e.eta.order == e.tensor.order * 36
        direct = tensor_direct(e.pair)
        assert direct.order == e.tensor.order
        assert direct.abelianization() == \
            subgroup_abelian_invariants(e.tensor)

    def test_embeddings(self):
        e = build_eta(trivial_pair(cyc(4), cyc(6)))
        assert e.embed_g.is_injective()
        assert e.embed_h_phi.is_injective()
        assert e.tensor.is_normal()

    def test_cap(self):
        pair = trivial_pair(cyc(4), cyc(6))
        with pytest.raises(CapExceeded):
            build_eta(pair, cap=10)

    def test_fault_flag_diverges(self):
        pair = trivial_pair(cyc(2), cyc(2))
        with pytest.raises(BudgetExceeded):
            build_eta(pair, EnumerationBudget(max_cosets=500),
                      skip_pairing_relators=True)

    def test_fault_flag_harmless_on_trivial_factor(self):
        pair = trivial_pair(cyc(1), cyc(4))
        e = build_eta(pair, skip_pairing_relators=True)
        assert e.eta.order == 4

    @pytest.mark.parametrize("name", ["C4", "C2xC2", "S3", "D4", "Q8"])
    def test_generator_scope_matches_full_build(self, name):
        g = realize_name(name)
        full = build_nu(g)
        lean = build_nu(g, relator_scope="generators")
        assert lean.eta.order == full.eta.order
        assert lean.tensor.order == full.tensor.order


class TestTensorDirect:
    def test_c2_c2(self):
        assert tensor_direct(trivial_pair(cyc(2), cyc(2))).order == 2

    def test_c6_c4(self):
        assert tensor_direct(trivial_pair(cyc(6), cyc(4))).order == 2

    def test_trivial_factor(self):
        assert tensor_direct(trivial_pair(cyc(1), realize_name("S3"))).order \
            == 1

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_abelian_reduction_both_routes(self, m, n):
        pair = trivial_pair(cyc(m), cyc(n))
        e = build_eta(pair)
        direct = tensor_direct(pair)
        want = abelian_tensor_oracle(
            AbelianInvariants.from_cyclic_orders([m]),
            AbelianInvariants.from_cyclic_orders([n]))
        assert e.tensor.order == (want.order() or 0)
        assert direct.order == (want.order() or 0)
        assert subgroup_abelian_invariants(e.tensor) == want
        assert direct.abelianization() == want

    def test_nonabelian_pair_reduces_to_abelianizations(self):
        s3 = realize_name("S3")
        pair = trivial_pair(s3, s3)
        e = build_eta(pair)
        want = abelian_tensor_oracle(s3.abelianization(),
                                     s3.abelianization())
        assert subgroup_abelian_invariants(e.tensor) == want


class TestTensorSet:
    def test_trivial_pair_single_tensor(self):
        e = build_eta(trivial_pair(cyc(1), cyc(1)))
        assert tensor_set(e).m == 1

    @pytest.mark.parametrize("n", range(1, 9))
    def test_cyclic_count_matches_bilinear_image(self, n):
        e = build_nu(cyc(n))
        ts = tensor_set(e)
        oracle = len({(i * j) % n for i in range(n) for j in range(n)})
        assert ts.m == oracle == n

    @pytest.mark.parametrize("name", SMALL)
    def test_subset_bound_and_generation(self, name):
        e = build_nu(realize_name(name))
        ts = tensor_set(e)
        assert ts.m <= e.tensor.order
        regen = closure(e.eta, ts.elements)
        assert regen.members == e.tensor.members

    def test_witnesses_evaluate_back(self):
        e = build_nu(realize_name("S3"))
        ts = tensor_set(e)
        for elt, (a, b) in ts.witness.items():
            got = e.eta.comm(int(e.embed_g.images[a]),
                             int(e.embed_h_phi.images[b]))
            assert got == elt
        assert 0 in ts.elements


class TestDerivedMap:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_cyclic_kernel_is_everything(self, n):
        e = build_nu(cyc(n))
        sub = j2(e)
        assert sub.order == e.tensor.order == n

    def test_s3_kernel_index(self):
        e = build_nu(realize_name("S3"))
        assert e.tensor.order == j2(e).order * 3

    def test_trivial_group(self):
        e = build_nu(cyc(1))
        assert j2(e).order == 1

    def test_kappa_image_is_derived_subgroup(self):
        s3 = realize_name("S3")
        e = build_nu(s3)
        kap = kappa(e)
        assert sorted(kap.image_members()) == \
            list(derived_subgroup(s3).members)

    def test_kappa_needs_based_build(self):
        e = build_eta(trivial_pair(cyc(2), cyc(3)))
        with pytest.raises(InternalInconsistency):
            kappa(e)


class TestDiagonals:
    def test_delta_c2_is_c2(self):
        e = build_nu(cyc(2))
        assert delta(e).order == 2

    def test_delta_tilde_c2_trivial(self):
        e = build_nu(cyc(2))
        assert delta_tilde(e).order == 1

    def test_delta_trivial_group(self):
        e = build_nu(cyc(1))
        assert delta(e).order == 1

    @pytest.mark.parametrize("n", range(2, 9))
    def test_cyclic_diagonals_match_bilinear_values(self, n):
        e = build_nu(cyc(n))
        # [i, j~] has bilinear value i*j; the diagonal is generated by the
        # squares, the symmetrized diagonal by the doubled products.
        sq = {(i * i) % n for i in range(n)}
        dbl = {(2 * i * j) % n for i in range(n) for j in range(n)}
        want_delta = len({(k * s) % n for s in _span(sq, n) for k in [1]})
        assert delta(e).order == len(_span(sq, n))
        assert delta_tilde(e).order == len(_span(dbl, n))
        assert want_delta == delta(e).order

    @pytest.mark.parametrize("name", SMALL)
    def test_normal_and_nested(self, name):
        e = build_nu(realize_name(name))
        jsub, dsub, dtsub = j2(e), delta(e), delta_tilde(e)
        assert set(dtsub.members) <= set(jsub.members)
        assert set(dsub.members) <= set(e.tensor.members)
        assert jsub.is_normal()
        assert dsub.is_normal()
        assert dtsub.is_normal()


def _span(values, n):
    """Additive subgroup of Z/n generated by a set of residues."""
    from math import gcd
    g = n
    for v in values:
        g = gcd(g, v)
    if g == 0:
        return {0}
    return {x for x in range(n) if x % g == 0}


class TestOracle:
    def test_known_values(self):
        c = AbelianInvariants.from_cyclic_orders
        assert abelian_tensor_oracle(c([4]), c([6])) == c([2])
        assert abelian_tensor_oracle(c([2, 2]), c([2, 2])).factors == \
            (2, 2, 2, 2)
        assert abelian_tensor_oracle(c([0]), c([7])) == c([7])
