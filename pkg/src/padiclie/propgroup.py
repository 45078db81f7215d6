"""Concrete pro-p groups: semidirect products Z_p x| Z_p^(d-1).

Elements are pairs (a, v) with the product (a1, v1)(a2, v2) =
(a1 + a2, v1 M^a2 + v2), so conjugation by the distinguished generator
x = (1, 0) acts on the fiber as the matrix M.

Subgroups are kept in split form: a witness element whose first coordinate
has minimal valuation, together with the fiber intersection as a span that
is invariant under the witness twist.  This representation is complete for
closed subgroups of these metabelian groups, because every subgroup meets
the fiber in a module span and projects onto a closed subgroup of Z_p.

The subgroup generated by all p-th powers of U = (w, F, T = M^(a_w)) has
fiber exactly the T-closure of pF + F (T-1)^(p-1): expanding the geometric
sum (1 + T^u + ... + T^((p-1)u)) binomially, every middle term has a
binomial coefficient divisible by p while the top term is (T^u - 1)^(p-1),
and (T^u - 1) is a Z[T]-multiple of (T - 1).  That closed form is what
`power_subgroup` computes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ClosureBudgetExceeded, ContextMismatch, NotNormal, NotProP
from .linalg import PMatrix, Span, _nilpotent_mod_p, mat_pow_padic, vec_add, vec_scale, vec_sub, vec_sub
from .padic import PadicContext, PadicScalar

CLOSURE_BUDGET_SLACK = 8


@dataclass(frozen=True)
class GroupElement:
    a: int
    v: tuple

    def to_json(self):
        return {"a": self.a, "v": list(self.v)}


class SemidirectGroup:
    """Z_p acting on Z_p^(d-1) through an invertible, unipotent-mod-p matrix."""

    __slots__ = ("ctx", "fiber_dim", "action", "_twist_cache")

    def __init__(self, ctx: PadicContext, action: PMatrix):
        if action.ctx != ctx:
            raise ContextMismatch("action matrix context differs")
        if action.rows != action.cols:
            raise ValueError("action matrix must be square")
        if not _nilpotent_mod_p(action - PMatrix.identity(ctx, action.rows)):
            raise NotProP("action matrix is not unipotent mod p")
        self.ctx = ctx
        self.fiber_dim = action.rows
        self.action = action
        self._twist_cache: dict[int, PMatrix] = {}

    @property
    def dim(self) -> int:
        return self.fiber_dim + 1

    def identity_element(self) -> GroupElement:
        return GroupElement(0, (0,) * self.fiber_dim)

    def element(self, a, v) -> GroupElement:
        mod = self.ctx.modulus
        a = a.value if isinstance(a, PadicScalar) else a % mod
        return GroupElement(a % mod, tuple(x % mod for x in v))

    def standard_generators(self) -> list[GroupElement]:
        gens = [self.element(1, (0,) * self.fiber_dim)]
        for i in range(self.fiber_dim):
            gens.append(self.element(0, tuple(1 if j == i else 0 for j in range(self.fiber_dim))))
        return gens

    def twist(self, a: int) -> PMatrix:
        """M^a for an exponent residue, through the p-power order at precision."""
        a %= self.ctx.modulus
        m = self._twist_cache.get(a)
        if m is None:
            m = mat_pow_padic(self.action, a)
            self._twist_cache[a] = m
        return m

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        mod = self.ctx.modulus
        tw = self.twist(h.a)
        return GroupElement((g.a + h.a) % mod, vec_add(tw.apply_row(g.v), h.v, mod))

    def inv(self, g: GroupElement) -> GroupElement:
        mod = self.ctx.modulus
        tw = self.twist(-g.a)
        return GroupElement(-g.a % mod, vec_scale(-1, tw.apply_row(g.v), mod))

    def conj(self, g: GroupElement, h: GroupElement) -> GroupElement:
        """h^-1 g h."""
        return self.mul(self.inv(h), self.mul(g, h))

    def comm(self, g: GroupElement, h: GroupElement) -> GroupElement:
        """g^-1 h^-1 g h."""
        return self.mul(self.inv(self.mul(h, g)), self.mul(g, h))

    def _geom_sum(self, T: PMatrix, n: int) -> PMatrix:
        """I + T + ... + T^(n-1) by binary splitting of the recurrence."""
        if n == 0:
            return PMatrix.zero(self.ctx, self.fiber_dim)
        if n % 2:
            s = self._geom_sum(T, n - 1)
            return s + T.pow(n - 1)
        half = self._geom_sum(T, n // 2)
        return half + half @ T.pow(n // 2)

    def pow(self, g: GroupElement, n) -> GroupElement:
        """g^n for an integer or p-adic exponent."""
        mod = self.ctx.modulus
        if isinstance(n, PadicScalar):
            n = n.value
        if n < 0:
            return self.pow(self.inv(g), -n)
        T = self.twist(g.a)
        s = self._geom_sum(T, n)
        return GroupElement(n * g.a % mod, s.apply_row(g.v))

    def to_json(self) -> dict:
        return {
            "p": self.ctx.p,
            "precision": self.ctx.precision,
            "fiber_dim": self.fiber_dim,
            "action": self.action.entries,
        }

    @classmethod
    def from_json(cls, data: dict, ctx: PadicContext | None = None) -> "SemidirectGroup":
        if ctx is None:
            ctx = PadicContext(int(data["p"]), int(data["precision"]))
        return cls(ctx, PMatrix(ctx, data["action"]))


class SubgroupData:
    """A closed subgroup in split form: witness, fiber span, twist."""

    __slots__ = ("group", "witness", "fiber", "powers_are_whole_set")

    def __init__(self, group: SemidirectGroup, witness: GroupElement | None, fiber: Span):
        self.group = group
        ctx = group.ctx
        if witness is not None and witness.a % ctx.modulus == 0:
            fiber = fiber.sum(Span(ctx, group.fiber_dim, [witness.v]))
            witness = None
        self.witness = witness
        if witness is None:
            self.fiber = fiber
        else:
            self.fiber = _twist_closure(group, fiber, witness.a)
        self.powers_are_whole_set = None

    @property
    def h_valuation(self):
        """Valuation of the witness H-coordinate; precision N for a fiber subgroup."""
        if self.witness is None:
            return self.group.ctx.precision
        return self.group.ctx.val(self.witness.a)

    def generators(self) -> list[GroupElement]:
        gens = [] if self.witness is None else [self.witness]
        gens.extend(GroupElement(0, row) for row in self.fiber.rows)
        return gens

    def fiber_intersection(self) -> Span:
        """Span of the pure-fiber elements, witness depth included."""
        g = self.group
        if self.witness is None:
            return self.fiber
        e = g.ctx.val(self.witness.a)
        m = g.ctx.precision - e
        deep = g.pow(self.witness, g.ctx.p**m)
        assert deep.a % g.ctx.modulus == 0
        return _twist_closure(g, self.fiber.sum(Span(g.ctx, g.fiber_dim, [deep.v])), self.witness.a)

    def contains_element(self, x: GroupElement) -> bool:
        g = self.group
        ctx = g.ctx
        if x.a % ctx.modulus == 0:
            return self.fiber_intersection().member(x.v)
        if self.witness is None:
            return False
        va = ctx.val(x.a)
        e = ctx.val(self.witness.a)
        if va < e:
            return False
        _, u = ctx.unit_part(self.witness.a)
        lam = x.a * ctx.inv(u) // ctx.p**e % ctx.modulus
        rest = g.mul(g.inv(g.pow(self.witness, lam)), x)
        assert rest.a % ctx.modulus == 0
        return self.fiber_intersection().member(rest.v)

    def contains(self, other: "SubgroupData") -> bool:
        return all(self.contains_element(x) for x in other.generators())

    def __eq__(self, other):
        return (
            isinstance(other, SubgroupData)
            and self.group is other.group
            and self.contains(other)
            and other.contains(self)
        )

    def __hash__(self):
        raise TypeError("subgroups are compared by containment, not hashed")

    def is_trivial(self) -> bool:
        return self.witness is None and self.fiber.is_zero()

    def index_exp_in_group(self) -> int:
        """log_p |G : U| at precision."""
        g = self.group
        fiber_index = Span.full(g.ctx, g.fiber_dim).index_exp(self.fiber_intersection())
        return self.h_valuation + fiber_index

    def __repr__(self):
        return (
            f"SubgroupData(h_val={self.h_valuation}, witness={self.witness}, "
            f"fiber={list(self.fiber.rows)!r})"
        )


def _twist_closure(group: SemidirectGroup, S: Span, a: int) -> Span:
    """Closure of a fiber span under M^a and M^-a."""
    T = group.twist(a)
    Ti = T.inverse()
    budget = 4 * group.ctx.precision * group.dim + CLOSURE_BUDGET_SLACK
    cur = S
    for _ in range(budget):
        nxt = cur.sum(cur.image(T)).sum(cur.image(Ti))
        if nxt == cur:
            return cur
        cur = nxt
    raise ClosureBudgetExceeded("twist closure did not stabilise")


def generated_subgroup(group: SemidirectGroup, gens) -> SubgroupData:
    """Least split-form subgroup containing the generators.

    Each round either drops the witness valuation or grows the fiber span,
    so the reduction terminates after one pass plus span closures.
    """
    ctx = group.ctx
    mod = ctx.modulus
    gens = [g for g in gens if g != group.identity_element()]
    fiber_vectors = [g.v for g in gens if g.a % mod == 0]
    carried = [g for g in gens if g.a % mod != 0]
    if not carried:
        return SubgroupData(group, None, Span(ctx, group.fiber_dim, fiber_vectors))
    witness = min(carried, key=lambda g: ctx.val(g.a))
    e, u = ctx.unit_part(witness.a)
    uinv = ctx.inv(u)
    for g in carried:
        if g is witness:
            continue
        lam = g.a * uinv // ctx.p**e % mod
        rest = group.mul(group.inv(group.pow(witness, lam)), g)
        assert rest.a % mod == 0
        fiber_vectors.append(rest.v)
    fiber = _twist_closure(group, Span(ctx, group.fiber_dim, fiber_vectors), witness.a)
    return SubgroupData(group, witness, fiber)


def full_subgroup(group: SemidirectGroup) -> SubgroupData:
    return generated_subgroup(group, group.standard_generators())


def conjugate_subgroup(U: SubgroupData, h: GroupElement) -> SubgroupData:
    return generated_subgroup(U.group, [U.group.conj(g, h) for g in U.generators()])


def normal_closure(U: SubgroupData) -> SubgroupData:
    """Closure of U under conjugation by the standard generators."""
    group = U.group
    std = group.standard_generators()
    std = std + [group.inv(g) for g in std]
    budget = 4 * group.ctx.precision * group.dim + CLOSURE_BUDGET_SLACK
    cur = U
    for _ in range(budget):
        gens = cur.generators()
        new_gens = gens + [group.conj(g, h) for g in gens for h in std]
        nxt = generated_subgroup(group, new_gens)
        if nxt == cur:
            return cur
        cur = nxt
    raise ClosureBudgetExceeded("normal closure did not stabilise")


def join(U: SubgroupData, V: SubgroupData) -> SubgroupData:
    return generated_subgroup(U.group, U.generators() + V.generators())


def commutator_subgroup(U: SubgroupData, V: SubgroupData) -> SubgroupData:
    """Normal closure of the pairwise generator commutators [U, V]."""
    group = U.group
    comms = [group.comm(g, h) for g in U.generators() for h in V.generators()]
    return normal_closure(generated_subgroup(group, comms))


def power_subgroup(U: SubgroupData) -> SubgroupData:
    """The subgroup generated by all p-th powers of U (closed form; see module docstring)."""
    group = U.group
    ctx = group.ctx
    p = ctx.p
    pF = U.fiber.scale(p)
    if U.witness is None:
        return SubgroupData(group, None, pF)
    T = group.twist(U.witness.a)
    E = T - PMatrix.identity(ctx, group.fiber_dim)
    deep = U.fiber.image(E.pow(p - 1))
    fiber = _twist_closure(group, pF.sum(deep), U.witness.a)
    return SubgroupData(group, group.pow(U.witness, p), fiber)


def powers_form_whole_subgroup(U: SubgroupData) -> bool:
    """Whether the pure-fiber part of <h^p : h in U> consists of p-th powers of U.

    Decided on a deterministic sample of the fiber part (canonical
    generators, their pairwise sums and p-scalings) against the finitely
    many witness exponents whose p-th power lands in the fiber at
    precision.  Recorded as a diagnostic, not used by any other operation.
    """
    group = U.group
    ctx = group.ctx
    p = ctx.p
    target = power_subgroup(U).fiber_intersection()
    if U.witness is None:
        return True  # abelian fiber: h^p = p h, and pF is exactly the power set
    e = ctx.val(U.witness.a)
    m = max(ctx.precision - 1 - e, 0)
    mod = ctx.modulus
    slices = []  # (offset vector, image span) per admissible witness exponent
    for t in range(ctx.p ** (e + 1)):
        lam = (ctx.p**m * t) % mod
        base = group.pow(U.witness, lam)
        wp = group.pow(base, p)
        assert wp.a % mod == 0
        twist_sum = group._geom_sum(group.twist(base.a), p)
        slices.append((wp.v, U.fiber.image(twist_sum)))
    gens = list(target.rows)
    sample = list(gens)
    sample += [vec_add(a, b, mod) for i, a in enumerate(gens) for b in gens[i + 1 :]]
    sample += [vec_scale(p, a, mod) for a in gens]
    for v in sample:
        if not any(img.member(vec_sub(v, off, mod)) for off, img in slices):
            return False
    return True


# ---------------------------------------------------------------------------
# standard series and the saturability check
# ---------------------------------------------------------------------------


def _series(group: SemidirectGroup, first: SubgroupData, step) -> list[SubgroupData]:
    terms = [first]
    budget = 6 * group.ctx.precision * group.dim + CLOSURE_BUDGET_SLACK
    for _ in range(budget):
        nxt = step(terms[-1])
        if nxt == terms[-1]:
            return terms
        terms.append(nxt)
        if nxt.is_trivial():
            return terms
    raise ClosureBudgetExceeded("series did not stabilise")


def gamma_series(group: SemidirectGroup) -> list[SubgroupData]:
    """gamma_1 = G, gamma_{i+1} = [gamma_i, G], to stabilisation at precision."""
    full = full_subgroup(group)
    return _series(group, full, lambda U: commutator_subgroup(U, full))


def lower_p_series_group(group: SemidirectGroup) -> list[SubgroupData]:
    """G_1 = G, G_{i+1} = [G_i, G] G_i^p, to stabilisation at precision."""
    full = full_subgroup(group)

    def step(U):
        return normal_closure(join(commutator_subgroup(U, full), power_subgroup(U)))

    return _series(group, full, step)


def frattini_p(group: SemidirectGroup) -> SubgroupData:
    """Phi(G) = G^p [G, G]."""
    full = full_subgroup(group)
    return normal_closure(join(power_subgroup(full), commutator_subgroup(full, full)))


def frattini_p_power(group: SemidirectGroup, record_power_set: bool = False) -> SubgroupData:
    """Phi(G)^p, the subgroup generated by p-th powers of Phi(G)."""
    phi = frattini_p(group)
    out = power_subgroup(phi)
    if record_power_set:
        out.powers_are_whole_set = powers_form_whole_subgroup(phi)
    return out


@dataclass
class GammaPhiReport:
    holds: bool
    gamma_generators: list
    failing: list

    def lines(self):
        out = [f"gamma_p(G) <= Phi(G)^p: {'yes' if self.holds else 'NO'}"]
        for g in self.failing:
            out.append(f"  generator outside Phi(G)^p: {g}")
        return out


def check_gamma_p_in_phi_p(group: SemidirectGroup) -> GammaPhiReport:
    """Membership of the gamma_p generators in Phi(G)^p."""
    group.ctx.require_odd()
    p = group.ctx.p
    gammas = gamma_series(group)
    gamma_p = gammas[p - 1] if len(gammas) >= p else gammas[-1]
    phi_p = frattini_p_power(group)
    failing = [g for g in gamma_p.generators() if not phi_p.contains_element(g)]
    return GammaPhiReport(not failing, gamma_p.generators(), failing)


@dataclass
class GroupPotencyStep:
    index: int
    step_ok: bool
    deep_ok: bool

    @property
    def ok(self):
        return self.step_ok and self.deep_ok


@dataclass
class GroupPotencyReport:
    steps: list[GroupPotencyStep]
    terminal_ok: bool

    @property
    def passed(self):
        return self.terminal_ok and all(s.ok for s in self.steps)

    def first_failure(self):
        for s in self.steps:
            if not s.ok:
                return s.index
        return None if self.terminal_ok else len(self.steps) + 1

    def lines(self):
        out = []
        for s in self.steps:
            out.append(
                f"step {s.index}: [N_i,G] <= N_i+1: {'ok' if s.step_ok else 'FAIL'}; "
                f"[N_i,_(p-1) G] <= N_i+1^p: {'ok' if s.deep_ok else 'FAIL'}"
            )
        out.append(f"terminal term trivial at precision: {'ok' if self.terminal_ok else 'FAIL'}")
        out.append(f"overall: {'pass' if self.passed else 'fail'}")
        return out


def verify_group_potent_filtration(group: SemidirectGroup, chain) -> GroupPotencyReport:
    """Stepwise potency certificate for a given chain of normal subgroups."""
    full = full_subgroup(group)
    std = group.standard_generators()
    for U in chain:
        for g in U.generators():
            for h in std:
                if not U.contains_element(group.conj(g, h)):
                    raise NotNormal("chain member is not normal in the ambient group")
    p = group.ctx.p
    steps = []
    for i in range(len(chain) - 1):
        comm = commutator_subgroup(chain[i], full)
        step_ok = chain[i + 1].contains(comm)
        deep = chain[i]
        for _ in range(p - 1):
            deep = commutator_subgroup(deep, full)
        deep_ok = power_subgroup(chain[i + 1]).contains(deep)
        steps.append(GroupPotencyStep(i + 1, step_ok, deep_ok))
    terminal_ok = chain[-1].is_trivial()
    return GroupPotencyReport(steps, terminal_ok)
