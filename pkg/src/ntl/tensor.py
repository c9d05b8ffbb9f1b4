"""Mutual group actions, the commutator-pairing group eta(G,H), and the
non-abelian tensor product.

eta(G,H) is presented on the full element sets of both factors: Cayley
multiplication relators for each factor plus the two commutator-action
relator families quantified over every element triple.  The subgroup
generated by the commutators [g, h~] inside eta(G,H) is the non-abelian
tensor product; `tensor_direct` builds the same group a second way from the
biadditivity presentation on |G|*|H| symbols, serving as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abelian import AbelianInvariants, tensor_invariants
from .coset import (EnumerationBudget, EnumerationStats, enumerate_cosets,
                    regular_representation)
from .errors import (CapExceeded, IncompleteMap, Incompatible,
                     InternalInconsistency, NotActionHomomorphism,
                     NotAutomorphism)
from .groups import (Homomorphism, RealizedGroup, Subgroup, closure,
                     derived_subgroup, subgroup_as_group,
                     subgroup_from_members)
from .parsing import ActionSpec
from .words import Presentation, Word, commutator, conjugate

ETA_SIZE_CAP = 144  # |G| * |H| bound for the defining build


@dataclass(frozen=True)
class CompatibleActionPair:
    """Two mutual element-level actions that passed every compatibility check.

    g_on_h[x, b] is the image of the H-element b under the G-element x;
    h_on_g[y, a] is the image of the G-element a under the H-element y.
    """

    g: RealizedGroup
    h: RealizedGroup
    g_on_h: np.ndarray
    h_on_g: np.ndarray

    def __post_init__(self):
        self.g_on_h.setflags(write=False)
        self.h_on_g.setflags(write=False)


def _automorphism_failure(target: RealizedGroup, perm: np.ndarray) -> bool:
    n = target.order
    if len(np.unique(perm)) != n or perm[0] != 0:
        return True
    tab = target.table.astype(np.int64)
    return not np.array_equal(perm[tab], tab[perm[:, None], perm[None, :]])


def _tables_from_spec(actor: RealizedGroup, target: RealizedGroup,
                      spec: ActionSpec) -> np.ndarray:
    """Element-level action table induced by a generator-level spec."""
    apres = actor.source_presentation
    tpres = target.source_presentation
    if apres is None or tpres is None:
        raise InternalInconsistency(
            "action specs need presentation-backed groups")
    if spec.actor != apres.name or spec.target != tpres.name:
        raise IncompleteMap(
            f"action {spec.name!r} maps {spec.actor!r} on {spec.target!r}, "
            f"expected {apres.name!r} on {tpres.name!r}")
    n_t = target.order
    ar = np.arange(n_t, dtype=np.int64)
    gen_perms: list[np.ndarray] = []
    for gname in apres.generators:
        images = spec.generator_map[gname]
        img_elems = [target.evaluate(images[t]) for t in tpres.generators]
        perm = np.fromiter(
            (target.evaluate(w, img_elems) for w in target.element_words),
            dtype=np.int64, count=n_t)
        if _automorphism_failure(target, perm):
            raise NotAutomorphism(
                f"generator {gname!r} of action {spec.name!r} does not "
                f"induce an automorphism of {target.name!r}")
        gen_perms.append(perm)
    inv_perms = []
    for perm in gen_perms:
        inv = np.empty(n_t, dtype=np.int64)
        inv[perm] = ar
        inv_perms.append(inv)
    table = np.empty((actor.order, n_t), dtype=np.int64)
    for x in range(actor.order):
        cur = ar
        for gi, e in actor.element_words[x].letters:
            perm = gen_perms[gi] if e > 0 else inv_perms[gi]
            for _ in range(abs(e)):
                cur = perm[cur]
        table[x] = cur
    return table


def _validate_tables(g: RealizedGroup, h: RealizedGroup,
                     g_on_h: np.ndarray, h_on_g: np.ndarray,
                     label: str) -> CompatibleActionPair:
    """Run every element-level check and wrap the tables.

    Per-element automorphism first, then the two compatibility identities
    (first violating triple reported as the witness), then the
    homomorphism-into-automorphisms law for both actions.
    """
    for actor, target, table, what in ((g, h, g_on_h, "on the right factor"),
                                       (h, g, h_on_g, "on the left factor")):
        if table.shape != (actor.order, target.order):
            raise InternalInconsistency("action table has wrong shape")
        for x in range(actor.order):
            if _automorphism_failure(target, table[x].astype(np.int64)):
                raise NotAutomorphism(
                    f"{label}: element {actor.element_str(x)!r} of "
                    f"{actor.name!r} does not act as an automorphism "
                    f"{what}")
    for gi in range(g.order):
        for hi in range(h.order):
            for g1 in range(g.order):
                lhs = int(h_on_g[g_on_h[g1, hi], gi])
                rhs = g.conj(int(h_on_g[hi, g.conj(gi, g.inv(g1))]), g1)
                if lhs != rhs:
                    raise Incompatible(
                        f"{label}: compatibility fails at "
                        f"({g.element_str(gi)}, {h.element_str(hi)}, "
                        f"{g.element_str(g1)})",
                        witness=(gi, hi, g1))
    for hi in range(h.order):
        for gi in range(g.order):
            for h1 in range(h.order):
                lhs = int(g_on_h[h_on_g[h1, gi], hi])
                rhs = h.conj(int(g_on_h[gi, h.conj(hi, h.inv(h1))]), h1)
                if lhs != rhs:
                    raise Incompatible(
                        f"{label}: compatibility fails at "
                        f"({h.element_str(hi)}, {g.element_str(gi)}, "
                        f"{h.element_str(h1)})",
                        witness=(hi, gi, h1))
    for actor, table, what in ((g, g_on_h, "left"), (h, h_on_g, "right")):
        tab = actor.table
        for x in range(actor.order):
            for y in range(actor.order):
                composed = table[y][table[x]]
                if not np.array_equal(table[int(tab[x, y])], composed):
                    raise NotActionHomomorphism(
                        f"{label}: the {what} action is not a homomorphism "
                        f"(fails at {actor.element_str(x)}, "
                        f"{actor.element_str(y)})")
    return CompatibleActionPair(g, h, g_on_h.astype(np.int64),
                                h_on_g.astype(np.int64))


def validate_compatibility(g: RealizedGroup, h: RealizedGroup,
                           g_on_h: ActionSpec,
                           h_on_g: ActionSpec) -> CompatibleActionPair:
    """Build element-level tables from the generator-level specs and verify
    the whole compatibility contract."""
    t_gh = _tables_from_spec(g, h, g_on_h)
    t_hg = _tables_from_spec(h, g, h_on_g)
    return _validate_tables(g, h, t_gh, t_hg,
                            f"actions {g_on_h.name!r}/{h_on_g.name!r}")


def trivial_pair(g: RealizedGroup, h: RealizedGroup) -> CompatibleActionPair:
    g_on_h = np.tile(np.arange(h.order, dtype=np.int64), (g.order, 1))
    h_on_g = np.tile(np.arange(g.order, dtype=np.int64), (h.order, 1))
    return _validate_tables(g, h, g_on_h, h_on_g, "trivial actions")


def _conjugation_table(g: RealizedGroup) -> np.ndarray:
    tab = g.table.astype(np.int64)
    inv = g.inverse.astype(np.int64)
    ar = np.arange(g.order, dtype=np.int64)
    inner = tab[inv[:, None], ar[None, :]]
    return tab[inner, ar[:, None]]


def conjugation_pair(g: RealizedGroup) -> CompatibleActionPair:
    """Both actions by conjugation inside the same group."""
    table = _conjugation_table(g)
    return _validate_tables(g, g, table, table, "conjugation actions")


@dataclass
class EtaRealization:
    """A realized eta(G,H) with its embeddings and tensor subgroup."""

    eta: RealizedGroup
    embed_g: Homomorphism
    embed_h_phi: Homomorphism
    tensor: Subgroup
    tensor_group: RealizedGroup
    tensor_inclusion: Homomorphism
    pair: CompatibleActionPair
    presentation: Presentation
    stats: EnumerationStats
    is_square: bool
    is_nu: bool
    base: RealizedGroup | None
    theta: np.ndarray | None
    faulted: bool


@dataclass(frozen=True)
class TensorSet:
    """All values [a, b~] inside the tensor subgroup, with witnesses."""

    elements: tuple[int, ...]
    m: int
    witness: dict[int, tuple[int, int]]


def _unique_in_order(values) -> list[int]:
    seen = set()
    out = []
    for v in values:
        v = int(v)
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def build_eta(pair: CompatibleActionPair,
              budget: EnumerationBudget | None = None,
              *,
              cap: int = ETA_SIZE_CAP,
              relator_scope: str = "elements",
              skip_pairing_relators: bool = False,
              kappa_target: tuple | None = None,
              is_nu: bool = False,
              name: str | None = None) -> EtaRealization:
    """Realize eta(G,H) for a compatible pair.

    `relator_scope="generators"` is the opt-in variant that quantifies the
    commutator-action relator families over generator triples only; its
    output is validated against the full build by the test suite, never
    assumed.  `skip_pairing_relators` is the test-only fault switch that
    drops both families so the verification suite can prove its own
    sensitivity.
    """
    if relator_scope not in ("elements", "generators"):
        raise ValueError(f"unknown relator scope {relator_scope!r}")
    g, h = pair.g, pair.h
    ng, nh = g.order, h.order
    if ng * nh > cap:
        raise CapExceeded(
            f"|G|*|H| = {ng * nh} exceeds the build cap {cap}")
    if name is None:
        kind = "nu" if is_nu else "eta"
        name = f"{kind}({g.name})" if is_nu else f"eta({g.name},{h.name})"

    def x(a: int) -> int:
        return a

    def y(b: int) -> int:
        return ng + b

    gens = tuple(f"g{i}" for i in range(ng)) + tuple(
        f"h{j}" for j in range(nh))
    ggens = _unique_in_order(g.generator_images)
    hgens = _unique_in_order(h.generator_images)

    def cayley(offset, grp, seconds):
        tab = grp.table
        return [Word.of(((offset + a, 1), (offset + b, 1),
                         (offset + int(tab[a, b]), -1)))
                for a in range(grp.order) for b in seconds]

    def cayley_rest(offset, grp, defined):
        dset = set(defined)
        rest = [b for b in range(grp.order) if b not in dset]
        return cayley(offset, grp, rest)

    def pairing_one(gi, hi, g1):
        gp = g.conj(gi, g1)
        hp = int(pair.g_on_h[g1, hi])
        lhs = conjugate(commutator(Word.gen(x(gi)), Word.gen(y(hi))),
                        Word.gen(x(g1)))
        rhs = commutator(Word.gen(x(gp)), Word.gen(y(hp)))
        return lhs * ~rhs

    def pairing_two(gi, hi, h1):
        gp = int(pair.h_on_g[h1, gi])
        hp = h.conj(hi, h1)
        lhs = conjugate(commutator(Word.gen(x(gi)), Word.gen(y(hi))),
                        Word.gen(y(h1)))
        rhs = commutator(Word.gen(x(gp)), Word.gen(y(hp)))
        return lhs * ~rhs

    relators: list[Word] = []
    relators += cayley(0, g, ggens)
    relators += cayley(ng, h, hgens)
    def_triples1 = [(gi, hi, g1) for gi in ggens for hi in hgens
                    for g1 in ggens]
    def_triples2 = [(gi, hi, h1) for gi in ggens for hi in hgens
                    for h1 in hgens]
    if not skip_pairing_relators:
        relators += [pairing_one(*t) for t in def_triples1]
        relators += [pairing_two(*t) for t in def_triples2]
    defining_count = len(relators)
    relators += cayley_rest(0, g, ggens)
    relators += cayley_rest(ng, h, hgens)
    if not skip_pairing_relators and relator_scope == "elements":
        seen1 = set(def_triples1)
        seen2 = set(def_triples2)
        relators += [pairing_one(gi, hi, g1)
                     for gi in range(ng) for hi in range(nh)
                     for g1 in range(ng) if (gi, hi, g1) not in seen1]
        relators += [pairing_two(gi, hi, h1)
                     for gi in range(ng) for hi in range(nh)
                     for h1 in range(nh) if (gi, hi, h1) not in seen2]

    presentation = Presentation(name, gens, tuple(relators))
    table, stats = enumerate_cosets(presentation, (), budget,
                                    defining_count=defining_count)
    eta = regular_representation(table, presentation)

    embed_g_images = list(eta.generator_images[:ng])
    embed_h_images = list(eta.generator_images[ng:])
    embed_g = Homomorphism(g, eta, embed_g_images)
    embed_h = Homomorphism(h, eta, embed_h_images)
    tensors = _unique_in_order(
        eta.comm(embed_g_images[a], embed_h_images[b])
        for a in range(ng) for b in range(nh))
    tensor_sub = closure(eta, tensors)
    if not skip_pairing_relators:
        if not (embed_g.is_injective() and embed_h.is_injective()):
            raise InternalInconsistency(
                f"{name}: factor embeddings are not injective")
        if eta.order != tensor_sub.order * ng * nh:
            raise InternalInconsistency(
                f"{name}: order {eta.order} breaks the semidirect "
                f"decomposition {tensor_sub.order}*{ng}*{nh}")
        if not tensor_sub.is_normal():
            raise InternalInconsistency(
                f"{name}: tensor subgroup is not normal")
    tensor_group, tensor_incl = subgroup_as_group(tensor_sub)

    theta = None
    base = None
    if kappa_target is not None:
        base, g_elt, h_elt = kappa_target
        imgs = [int(g_elt[a]) for a in range(ng)] + \
            [int(h_elt[b]) for b in range(nh)]
        for w in presentation.relators:
            if base.evaluate(w, imgs) != 0:
                raise InternalInconsistency(
                    f"{name}: a defining relator does not vanish in "
                    f"{base.name!r}; the derived map is ill-defined")
        theta = np.fromiter(
            (base.evaluate(w, imgs) for w in eta.element_words),
            dtype=np.int64, count=eta.order)
        theta.setflags(write=False)

    return EtaRealization(
        eta=eta, embed_g=embed_g, embed_h_phi=embed_h, tensor=tensor_sub,
        tensor_group=tensor_group, tensor_inclusion=tensor_incl,
        pair=pair, presentation=presentation, stats=stats,
        is_square=pair.g is pair.h, is_nu=is_nu, base=base, theta=theta,
        faulted=skip_pairing_relators)


def build_nu(g: RealizedGroup,
             budget: EnumerationBudget | None = None,
             *,
             cap: int = ETA_SIZE_CAP,
             relator_scope: str = "elements",
             skip_pairing_relators: bool = False) -> EtaRealization:
    """eta(G,G) with both actions by conjugation, plus the derived map."""
    pair = conjugation_pair(g)
    ident = np.arange(g.order)
    return build_eta(pair, budget, cap=cap, relator_scope=relator_scope,
                     skip_pairing_relators=skip_pairing_relators,
                     kappa_target=(g, ident, ident), is_nu=True)


def tensor_direct(pair: CompatibleActionPair,
                  budget: EnumerationBudget | None = None,
                  cap: int = ETA_SIZE_CAP) -> RealizedGroup:
    """The tensor product from its own biadditivity presentation on the
    symbols a(x)b, an independent route used to cross-check the
    eta-subgroup construction."""
    g, h = pair.g, pair.h
    ng, nh = g.order, h.order
    if ng * nh > cap:
        raise CapExceeded(
            f"|G|*|H| = {ng * nh} exceeds the build cap {cap}")

    def t(a: int, b: int) -> int:
        return a * nh + b

    gens = tuple(f"t{a}_{b}" for a in range(ng) for b in range(nh))
    relators: list[Word] = []
    for a in range(ng):
        for a2 in range(ng):
            aa2 = g.mul(a, a2)
            for b in range(nh):
                ap = g.conj(a, a2)
                bp = int(pair.g_on_h[a2, b])
                relators.append(Word.of(((t(aa2, b), -1), (t(ap, bp), 1),
                                         (t(a2, b), 1))))
    for a in range(ng):
        for b in range(nh):
            for b2 in range(nh):
                bb2 = h.mul(b, b2)
                ap = int(pair.h_on_g[b2, a])
                bp = h.conj(b, b2)
                relators.append(Word.of(((t(a, bb2), -1), (t(a, b2), 1),
                                         (t(ap, bp), 1))))
    name = f"tensor({g.name},{h.name})"
    presentation = Presentation(name, gens, tuple(relators))
    table, _ = enumerate_cosets(presentation, (), budget)
    return regular_representation(table, presentation)


def abelian_tensor_oracle(a: AbelianInvariants,
                          b: AbelianInvariants) -> AbelianInvariants:
    """Classical reduction: with trivial actions the tensor product is the
    tensor product of the abelianizations over the integers."""
    return tensor_invariants(a, b)


def tensor_set(e: EtaRealization) -> TensorSet:
    """All tensors [a, b~], with the first witnessing pair per value."""
    eg = e.embed_g.images
    eh = e.embed_h_phi.images
    eta = e.eta
    witness: dict[int, tuple[int, int]] = {}
    order: list[int] = []
    for a in range(e.pair.g.order):
        for b in range(e.pair.h.order):
            v = eta.comm(int(eg[a]), int(eh[b]))
            if v not in witness:
                witness[v] = (a, b)
                order.append(v)
    elements = tuple(sorted(order))
    return TensorSet(elements=elements, m=len(elements), witness=witness)


def _require_square(e: EtaRealization, what: str):
    if not e.is_square:
        raise InternalInconsistency(
            f"{what} needs a square build (same group on both sides)")


def _require_based(e: EtaRealization, what: str):
    if e.theta is None or e.base is None:
        raise InternalInconsistency(
            f"{what} needs a build with a recorded derived-map target")


def kappa(e: EtaRealization) -> Homomorphism:
    """Derived map [G,G~] -> G, [g,h~] |-> [g,h], on the tensor subgroup."""
    _require_based(e, "kappa")
    if e.is_nu and not e.faulted:
        base = e.base
        image = set(int(v) for v in
                    np.unique(e.theta[e.tensor.members_array()]))
        if image != set(derived_subgroup(base).members):
            raise InternalInconsistency(
                "derived map image differs from the derived subgroup")
    mem = e.tensor.members_array()
    return Homomorphism(e.tensor_group, e.base, e.theta[mem])


def j2(e: EtaRealization) -> Subgroup:
    """Kernel of the derived map, as a subgroup of eta."""
    _require_based(e, "j2")
    mem = e.tensor.members_array()
    inside = mem[e.theta[mem] == 0]
    return subgroup_from_members(e.eta, (int(v) for v in inside))


def delta(e: EtaRealization) -> Subgroup:
    """Diagonal subgroup, generated by the square tensors [g, g~]."""
    _require_square(e, "the diagonal subgroup")
    eg = e.embed_g.images
    eh = e.embed_h_phi.images
    vals = [e.eta.comm(int(eg[a]), int(eh[a]))
            for a in range(e.pair.g.order)]
    return closure(e.eta, _unique_in_order(vals))


def delta_tilde(e: EtaRealization) -> Subgroup:
    """Subgroup generated by the symmetrized tensors [g,h~][h,g~]."""
    _require_square(e, "the symmetrized diagonal subgroup")
    eg = e.embed_g.images
    eh = e.embed_h_phi.images
    eta = e.eta
    n = e.pair.g.order
    vals = []
    for a in range(n):
        for b in range(n):
            vals.append(eta.mul(eta.comm(int(eg[a]), int(eh[b])),
                                eta.comm(int(eg[b]), int(eh[a]))))
    sub = closure(eta, _unique_in_order(vals))
    if e.theta is not None:
        bad = [v for v in sub.members if e.theta[v] != 0]
        if bad:
            raise InternalInconsistency(
                "symmetrized diagonal escapes the derived-map kernel")
    return sub
