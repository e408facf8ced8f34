"""Contractions, conjugation by isomorphisms, and homological perturbation.

Convention throughout: a contraction (P, I, H) between (big, D) and
(small, d) satisfies

    PI = id,   id − IP = HD + DH,   DI = Id,   PD = dP,
    HI = 0,    PH = 0,   HH = 0.

For a perturbation δ of D with δ strictly lowering the filtration, set
A = Σ_k (−δH)^k δ and

    d' = d + PAI,   I' = I − HAI,   P' = P − PAH,   H' = H − HAH.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ce_complex import CEComplex, ULAModule
from .enveloping.uenv import EnvelopingData
from .graded_linear import ONE, GradedSpace, InvalidInput, LinearOperator, invert, is_invertible
from .lie_pair import Choices, LiePair, apply_choices, build_connections, require_valid
from .pullback import PullbackModule, contraction_checks


class LocalNilpotencyError(ValueError):
    pass


class ConstructionError(AssertionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class Contraction:
    P: LinearOperator
    I: LinearOperator
    H: LinearOperator
    D: LinearOperator
    d: LinearOperator

    @property
    def big(self) -> GradedSpace:
        return self.D.domain

    @property
    def small(self) -> GradedSpace:
        return self.d.domain

    def checks(self) -> list:
        return contraction_checks({"P": self.P, "I": self.I, "H": self.H, "D": self.D, "d": self.d})

    def failures(self) -> list:
        return [(n, w) for n, ok, w in self.checks() if not ok]


@dataclass
class PerturbationReport:
    terms: int
    lowering: bool
    square_zero: bool
    extra: dict = field(default_factory=dict)


def conjugate(base: Contraction, iso_big: LinearOperator, iso_small: LinearOperator) -> Contraction:
    """Push a contraction forward along isomorphisms of the big and small complexes."""
    for iso in (iso_big, iso_small):
        if not is_invertible(iso):
            raise InvalidInput("conjugating map is not invertible")
    ib = invert(iso_big)
    ism = invert(iso_small)
    return Contraction(
        P=iso_small @ base.P @ ib,
        I=iso_big @ base.I @ ism,
        H=iso_big @ base.H @ ib,
        D=iso_big @ base.D @ ib,
        d=iso_small @ base.d @ ism,
    )


def strictly_lowers(op: LinearOperator) -> bool:
    wd, wc = op.domain.weights, op.codomain.weights
    for j, col in enumerate(op.cols):
        for i in col:
            if wc[i] >= wd[j]:
                return False
    return True


def perturb(base: Contraction, delta: LinearOperator):
    """Homological perturbation of ``base`` by ``delta``; returns (contraction, report)."""
    if not strictly_lowers(delta):
        raise LocalNilpotencyError("perturbation does not strictly lower the filtration")
    Dp = base.D + delta
    if not (Dp @ Dp).is_zero():
        raise ValueError("perturbed differential does not square to zero")
    # A = Σ_k (−δH)^k δ
    mdh = -(delta @ base.H)
    term = delta
    A = delta
    terms = 1 if not delta.is_zero() else 0
    for _ in range(base.big.dim + 1):
        term = mdh @ term
        if term.is_zero():
            break
        A = A + term
        terms += 1
    H, I, P = base.H, base.I, base.P
    out = Contraction(
        P=P - P @ A @ H,
        I=I - H @ A @ I,
        H=H - H @ A @ H,
        D=Dp,
        d=base.d + P @ A @ I,
    )
    return out, PerturbationReport(terms=terms, lowering=True, square_zero=True)


@dataclass
class MainContraction:
    """All data of the pipeline for one pair, one set of choices and one truncation."""

    pair: LiePair
    doc_pair: LiePair
    choices: Choices
    N: int
    pm: PullbackModule
    env: EnvelopingData
    sym_contraction: Contraction
    pbw_contraction: Contraction
    contraction: Contraction
    report: PerturbationReport
    P_U: LinearOperator
    d_ULA: LinearOperator
    PBW: LinearOperator
    S: LinearOperator
    checks: dict

    @property
    def small(self) -> GradedSpace:
        return self.contraction.small

    @property
    def big(self) -> GradedSpace:
        return self.contraction.big


def symmetric_contraction(env: EnvelopingData) -> Contraction:
    sym = env.sym
    small = sym.small_complex()
    big = sym.space
    return Contraction(
        P=sym.operator(sym.P_S, small.space),
        I=LinearOperator.from_function(small.space, big, 0,
                                       lambda j: big.to_indices(sym.I_S({small.space.labels[j]: ONE}))),
        H=sym.operator(sym.H_S, shift=-1),
        D=sym.operator(sym.D_S, shift=1),
        d=small.d_operator(),
    )


def _relabel(op: LinearOperator, domain: GradedSpace, codomain: GradedSpace) -> LinearOperator:
    return LinearOperator(domain, codomain, op.shift, op.cols)


def build_main_contraction(pair: LiePair, choices: Choices | None = None, N: int = 3,
                           verify: bool = True) -> MainContraction:
    """contraction → symmetric tensors → PBW conjugation → perturbation by D_U − D^{pbw}."""
    choices = choices or Choices()
    require_valid(pair)
    new_pair, aux, S = apply_choices(pair, choices)
    conn = build_connections(new_pair, aux)
    pm = PullbackModule(new_pair, conn)
    env = EnvelopingData(pm, N)
    symc = symmetric_contraction(env)
    big = env.space
    small = symc.small
    symc = Contraction(P=_relabel(symc.P, big, small), I=_relabel(symc.I, small, big),
                       H=_relabel(symc.H, big, big), D=_relabel(symc.D, big, big), d=symc.d)
    PBW = env.PBW_matrix()
    pbwc = conjugate(symc, PBW, LinearOperator.identity(small))
    DU = env.D_U_matrix()
    delta = DU - pbwc.D
    hp, rep = perturb(pbwc, delta)
    PU = env.op(env.P_U, codomain=small)
    ula_cx = CEComplex(new_pair, ULAModule(env.ula), pm.ext)
    d_ula = _relabel(ula_cx.d_operator(), small, small)
    checks = {}
    if verify:
        checks["P^hp = P_U"] = hp.P == PU
        checks["d^hp = d_A"] = hp.d == d_ula
        if not checks["P^hp = P_U"]:
            j = (hp.P - PU).first_nonzero_column()
            raise ConstructionError("perturbed projection differs from P_U", witness=big.labels[j])
        if not checks["d^hp = d_A"]:
            j = (hp.d - d_ula).first_nonzero_column()
            raise ConstructionError("perturbed small differential differs from d_A", witness=small.labels[j])
    return MainContraction(pair=new_pair, doc_pair=pair, choices=choices, N=N, pm=pm, env=env,
                           sym_contraction=symc, pbw_contraction=pbwc, contraction=hp, report=rep,
                           P_U=PU, d_ULA=d_ula, PBW=PBW, S=S, checks=checks)
