"""Eisenstein congruences for weight-2 cusp forms of prime level.

Given (N, p) the cuspidal Hecke algebra is localized at the Eisenstein
maximal ideal by splitting off generalized eigenspaces, the index of the
Eisenstein ideal is computed as a lattice index, and per-Galois-orbit
congruence depths are read off from norms of a_l - (1 + l) over the
irreducible factors of a primitive element's characteristic polynomial.

Depths are computed twice: once through resultants of the polynomial
expressions a_l = h_l(theta), and once as determinants of T_l - (1 + l)
restricted to each orbit's invariant sublattice.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import padic_matrix as pm
from .arith import is_prime, primes_upto, vp
from .dvr import PadicPoly, QpFactor, _hensel_lift_lists, _pdivmod, factor_over_qp, norm_valuation
from .errors import (
    ExportUnsupported,
    InvariantViolation,
    MazurMismatch,
    NoPrimitiveElement,
    PrecisionExhausted,
)
from .lattice import LatticeBasis, algebra_closure, lattice_index
from .modsym import build_space, hecke_matrix, sturm_bound

log = logging.getLogger(__name__)

__all__ = [
    "EisensteinComponent",
    "EigenOrbit",
    "MazurRow",
    "numerator_valuation",
    "hecke_generators",
    "eisenstein_component",
    "eisenstein_ideal_order",
    "orbit_depths",
    "analyze",
    "mazur_sweep",
    "export_table",
    "START_PRECISION",
    "MAX_PRECISION",
]

START_PRECISION = 32
MAX_PRECISION = 512


def numerator_valuation(N: int, p: int) -> int:
    """v_p of the numerator of (N - 1)/12 in lowest terms."""
    num = Fraction(N - 1, 12).numerator
    if num == 0:
        return 0
    return vp(num, p)


def hecke_generators(N: int, range_factor: int = 1) -> list[int]:
    """Primes l <= range_factor * Sturm bound, l != N."""
    return [ell for ell in primes_upto(range_factor * sturm_bound(N)) if ell != N]


@dataclass
class EisensteinComponent:
    """The Eisenstein-local summand of the cuspidal Hecke module.

    ``basis`` spans the component inside the cuspidal lattice (columns, in
    Z_p^g known mod p^precision); ``hecke[l]`` is T_l restricted to it.
    """

    level: int
    prime: int
    precision: int
    rank: int
    generators: list[int]
    basis: pm.Matrix
    hecke: dict[int, pm.Matrix]

    @property
    def modulus(self) -> int:
        return self.prime**self.precision


def _split_eisenstein(A: pm.Matrix, target: int, p: int, k: int):
    """Kernel lattice of the Eisenstein-side Hensel factor of char(A) at A."""
    q = p**k
    chi = pm.charpoly(A, q)
    lin = [(-target) % p, 1]
    a = 0
    rest = [c % p for c in chi]
    while True:
        quo, rem = _pdivmod(rest, lin, p)
        if rem:
            break
        rest = quo
        a += 1
    if a == 0:
        return None, k
    if len(rest) == 1:
        return pm.identity(len(A)), k
    F_bar = [1]
    for _ in range(a):
        F_bar = [x % p for x in _poly_mul(F_bar, lin)]
    F, _ = _hensel_lift_lists(chi, F_bar, rest, p, k)
    FA = pm.poly_at_matrix(F, A, q)
    B, kk = pm.kernel_basis(FA, p, k)
    if len(B[0]) != a:
        raise PrecisionExhausted("generalized eigenspace rank not determined at this precision")
    return B, kk


def _poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


def eisenstein_component(
    N: int,
    p: int,
    K: int = START_PRECISION,
    generators: list[int] | None = None,
    space=None,
    cache=None,
    hecke: dict[int, list[list[int]]] | None = None,
) -> EisensteinComponent:
    """Localize the cuspidal Hecke module at the Eisenstein maximal ideal.

    ``hecke`` may supply integer Hecke matrices directly (used to check
    that results do not depend on the choice of integral basis).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    gens = generators if generators is not None else hecke_generators(N)
    if hecke is None:
        space = space or build_space(N)
        hecke = {ell: hecke_matrix(space, ell, cache).as_lists() for ell in gens}
    g = len(next(iter(hecke.values()))) if hecke else 0
    q = p**K
    if g == 0:
        return EisensteinComponent(N, p, K, 0, gens, [], {ell: [] for ell in gens})
    B = pm.identity(g)
    k = K
    for ell in gens:
        A = pm.restrict(pm.reduce(hecke[ell], p**k), B, p, k) if len(B[0]) < g else pm.reduce(hecke[ell], q)
        ker, kk = _split_eisenstein(A, 1 + ell, p, k)
        if ker is None:
            return EisensteinComponent(N, p, K, 0, gens, [], {e: [] for e in gens})
        if len(ker[0]) < len(A):
            k = kk
            B = pm.mat_mul(B, pm.reduce(ker, p**k), p**k)
    if k < 2:
        raise PrecisionExhausted("component precision exhausted")
    r = len(B[0])
    res = {}
    for ell in gens:
        A = pm.restrict(pm.reduce(hecke[ell], p**k), B, p, k)
        # T_l - (1 + l) must be nilpotent modulo p on the component
        E = pm.shift_diagonal(A, -(1 + ell), p)
        P = pm.identity(r)
        for _ in range(r):
            P = pm.mat_mul(P, E, p)
        if any(any(row) for row in P):
            raise InvariantViolation(f"T_{ell} - {1 + ell} is not nilpotent mod p on the component")
        res[ell] = A
    return EisensteinComponent(N, p, k, r, gens, B, res)


def _flatten(M: pm.Matrix) -> list[int]:
    return [x for row in M for x in row]


def _matmul_flat(r: int):
    def mul(a, b, q):
        A = [list(a[i * r:(i + 1) * r]) for i in range(r)]
        B = [list(b[i * r:(i + 1) * r]) for i in range(r)]
        return _flatten(pm.mat_mul(A, B, q))

    return mul


def hecke_algebra(comp: EisensteinComponent) -> LatticeBasis:
    """Z_p-lattice of the algebra generated by the restricted T_l (flattened r x r)."""
    r, p, k = comp.rank, comp.prime, comp.precision
    one = _flatten(pm.identity(r))
    gens = [_flatten(comp.hecke[ell]) for ell in comp.generators]
    return algebra_closure(one, gens, p, k, _matmul_flat(r))


def eisenstein_ideal(comp: EisensteinComponent, T: LatticeBasis) -> LatticeBasis:
    r, p, k = comp.rank, comp.prime, comp.precision
    q = p**k
    mul = _matmul_flat(r)
    gens = []
    for ell in comp.generators:
        eps = _flatten(pm.shift_diagonal(comp.hecke[ell], -(1 + ell), q))
        gens.extend(mul(eps, list(t), q) for t in T.columns)
    return LatticeBasis.span(gens, p, k, r * r)


def eisenstein_ideal_order(comp: EisensteinComponent, check: bool = True) -> int:
    """v_p(#T/J) for the Eisenstein ideal J; checked against the numerator of (N - 1)/12."""
    if comp.rank == 0:
        order = 0
    else:
        T = hecke_algebra(comp)
        J = eisenstein_ideal(comp, T)
        if J.rank < T.rank:
            # J has finite index for prime level, so a rank drop is a truncation artifact
            raise PrecisionExhausted("Eisenstein ideal rank not determined at this precision")
        order = lattice_index(T, J, comp.prime)
    if check:
        expected = numerator_valuation(comp.level, comp.prime)
        if order != expected:
            raise MazurMismatch(f"#T/J has valuation {order}, numerator has {expected}")
    return order


def hecke_saturation_index(comp: EisensteinComponent) -> int:
    """v_p of the index of the Hecke lattice in its saturation inside M_r(Z_p); a diagnostic."""
    if comp.rank == 0:
        return 0
    T = hecke_algebra(comp)
    sat, _ = pm.image_basis(pm.transpose([list(c) for c in T.columns]), comp.prime, T.reliable_precision)
    S = LatticeBasis.span(pm.transpose(sat), comp.prime, T.reliable_precision, T.ambient_rank)
    return lattice_index(S, T, comp.prime)


def ideal_is_principal(comp: EisensteinComponent) -> bool:
    """Decide principality of J by Nakayama: J is principal iff dim J/mJ = 1."""
    if comp.rank == 0:
        return True
    p, k = comp.prime, comp.precision
    q = p**k
    T = hecke_algebra(comp)
    J = eisenstein_ideal(comp, T)
    mul = _matmul_flat(comp.rank)
    m = J + T.scale(p)
    mJ = LatticeBasis.span([mul(list(a), list(b), q) for a in m.columns for b in J.columns], p, k, J.ambient_rank)
    return lattice_index(J, mJ, p) == 1


@dataclass
class EigenOrbit:
    """One Galois orbit of eigenforms congruent to the Eisenstein series."""

    factor: PadicPoly
    degree: int
    ramification: int
    residue_degree: int
    certificate: str
    hecke_images: dict[int, tuple[tuple[int, ...], int]]
    depth: int
    basis: pm.Matrix = field(repr=False, default_factory=list)
    theta_block: pm.Matrix = field(repr=False, default_factory=list)
    qp_factor: QpFactor | None = field(repr=False, default=None)

    @property
    def normalized_depth(self) -> Fraction:
        """(1/e) times the sum of the per-form depths m over the orbit, in p-units."""
        return Fraction(self.depth)

    def summary(self) -> dict:
        return {
            "degree": self.degree,
            "ramification": self.ramification,
            "residue_degree": self.residue_degree,
            "certificate": self.certificate,
            "depth": str(self.normalized_depth),
        }


def _is_squarefree(chi: list[int], p: int, k: int) -> bool:
    f = PadicPoly(tuple(chi), p, k)
    if len(chi) <= 2:
        return True
    try:
        norm_valuation(f, f.derivative())
    except PrecisionExhausted:
        return False
    return True


def primitive_element(comp: EisensteinComponent, seed: int = 0) -> tuple[pm.Matrix, dict[int, int]]:
    """A matrix theta in the local algebra with squarefree characteristic polynomial.

    Returns theta and its integer coefficients in the generators.  Single
    generators are tried first, then seeded random combinations.
    """
    p, k = comp.prime, comp.precision
    q = p**k
    for ell in comp.generators:
        if _is_squarefree(pm.charpoly(comp.hecke[ell], q), p, k):
            return comp.hecke[ell], {ell: 1}
    rng = random.Random(seed)
    for _ in range(50):
        coeffs = {ell: rng.randint(-5, 5) for ell in comp.generators}
        theta = pm.zeros(comp.rank, comp.rank)
        for ell, c in coeffs.items():
            theta = pm.mat_add(theta, comp.hecke[ell], q, c)
        if _is_squarefree(pm.charpoly(theta, q), p, k):
            return theta, coeffs
    raise NoPrimitiveElement("no squarefree primitive element found")


def orbit_depths(comp: EisensteinComponent, seed: int = 0, theta: pm.Matrix | None = None) -> tuple[list[EigenOrbit], Fraction]:
    """Per-orbit depths min_l v_p(Norm(a_l - (1 + l))) and their total."""
    if comp.rank == 0:
        return [], Fraction(0)
    p, k, r = comp.prime, comp.precision, comp.rank
    q = p**k
    if theta is None:
        theta, _ = primitive_element(comp, seed)
    chi = pm.charpoly(theta, q)
    factors = factor_over_qp(PadicPoly(tuple(chi), p, k))
    kf = min(f.poly.precision for f in factors)

    # express every T_l as a polynomial in theta
    powers = [pm.identity(r)]
    for _ in range(r - 1):
        powers.append(pm.mat_mul(powers[-1], theta, q))
    cols = pm.transpose([_flatten(P) for P in powers])
    images: dict[int, tuple[list[int], int]] = {}
    for ell in comp.generators:
        x, shift, prec = pm.solve(cols, _flatten(comp.hecke[ell]), p, k)
        if prec < 1:
            raise PrecisionExhausted("Hecke operator not determined as a polynomial in theta")
        images[ell] = (x, shift)

    orbits = []
    for fac in factors:
        g = fac.poly
        d = fac.degree
        # route A: resultants of g with h_l - (1 + l)
        depth_a = None
        for ell, (x, s) in images.items():
            qq = p ** min(kf, k)
            h = [c % qq for c in x]
            h[0] = (h[0] - (1 + ell) * p**s) % qq
            v = norm_valuation(g.reduce_precision(min(kf, k)), PadicPoly(tuple(h), p, min(kf, k))) - s * d
            depth_a = v if depth_a is None else min(depth_a, v)
        # route B: determinants on the invariant sublattice ker g(theta)
        kb = min(kf, k)
        G = pm.poly_at_matrix(g.reduce_precision(kb).as_list(), pm.reduce(theta, p**kb), p**kb)
        B, kk = pm.kernel_basis(G, p, kb)
        if len(B[0]) != d or kk < 1:
            raise PrecisionExhausted("orbit sublattice not determined at this precision")
        depth_b = None
        for ell in comp.generators:
            A = pm.restrict(pm.reduce(comp.hecke[ell], p**kk), pm.reduce(B, p**kk), p, kk)
            v = pm.det_valuation(pm.shift_diagonal(A, -(1 + ell), p**kk), p, kk)
            depth_b = v if depth_b is None else min(depth_b, v)
        if depth_a != depth_b:
            raise InvariantViolation(f"orbit depth disagrees between routes: {depth_a} vs {depth_b}")
        cert = fac.certificate
        orbits.append(
            EigenOrbit(
                factor=g,
                degree=d,
                ramification=cert.ramification,
                residue_degree=cert.residue_degree,
                certificate=cert.kind,
                hecke_images={ell: (tuple(x), s) for ell, (x, s) in images.items()},
                depth=depth_a,
                basis=B,
                theta_block=pm.restrict(pm.reduce(theta, p**kk), pm.reduce(B, p**kk), p, kk),
                qp_factor=fac,
            )
        )
    orbits.sort(key=lambda o: (o.degree, o.ramification, o.depth, o.factor.coeffs))
    total = sum((o.normalized_depth for o in orbits), Fraction(0))
    return orbits, total


@dataclass
class MazurRow:
    N: int
    p: int
    numerator_valuation: int
    rank: int
    order_T_mod_J: int
    total_depth: Fraction
    orbits: list[dict]
    principal: bool | None
    precision: int
    verdict: str
    error: str | None = None
    saturation_index: int = 0

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "p": self.p,
            "numerator_valuation": self.numerator_valuation,
            "rank": self.rank,
            "order_T_mod_J": self.order_T_mod_J,
            "total_depth": str(self.total_depth),
            "orbits": self.orbits,
            "principal": self.principal,
            "verdict": self.verdict,
            "error": self.error,
            "saturation_index": self.saturation_index,
        }


def _verdict(total: Fraction, expected: int) -> str:
    if total == expected:
        return "equality"
    return "strict-inequality" if total > expected else "violation"


def analyze(
    N: int,
    p: int,
    K: int | None = None,
    range_factor: int = 1,
    seed: int = 0,
    cache=None,
    hecke: dict[int, list[list[int]]] | None = None,
    max_precision: int = MAX_PRECISION,
) -> tuple[MazurRow, EisensteinComponent, list[EigenOrbit]]:
    """Full analysis of (N, p) with the doubling precision policy."""
    K = K or START_PRECISION
    gens = hecke_generators(N, range_factor)
    space = None
    if hecke is None:
        space = build_space(N)
        hecke = {ell: hecke_matrix(space, ell, cache).as_lists() for ell in gens}
    nv = numerator_valuation(N, p)
    while True:
        try:
            comp = eisenstein_component(N, p, K, gens, hecke=hecke)
            order = eisenstein_ideal_order(comp)
            orbits, total = orbit_depths(comp, seed)
            principal = ideal_is_principal(comp) if comp.rank <= 6 else None
            saturation = hecke_saturation_index(comp)
            break
        except PrecisionExhausted:
            if 2 * K > max_precision:
                raise
            log.info("precision %d exhausted for (%d, %d); doubling", K, N, p)
            K *= 2
    row = MazurRow(
        N=N,
        p=p,
        numerator_valuation=nv,
        rank=comp.rank,
        order_T_mod_J=order,
        total_depth=total,
        orbits=[o.summary() for o in orbits],
        principal=principal,
        saturation_index=saturation,
        precision=K,
        verdict=_verdict(total, nv),
    )
    return row, comp, orbits


def sweep_pairs(N_max: int, primes: list[int] | None = None) -> list[tuple[int, int]]:
    pairs = []
    for N in primes_upto(N_max):
        num = Fraction(N - 1, 12).numerator
        if num <= 1:
            continue
        for p in primes_upto(num):
            if num % p == 0 and (primes is None or p in primes):
                pairs.append((N, p))
    return pairs


def _sweep_one(args) -> MazurRow:
    N, p, cache_dir = args
    from .cache import HeckeCache

    cache = HeckeCache(cache_dir) if cache_dir is not None else None
    try:
        row, _, _ = analyze(N, p, cache=cache)
        if row.numerator_valuation >= 1 and row.total_depth < 1:
            row.verdict = "violation"
            row.error = "no congruent cusp form found"
        return row
    except Exception as exc:  # rows are independent; record and move on
        from .errors import CongLabError

        code = exc.exit_code if isinstance(exc, CongLabError) else 1
        return MazurRow(N, p, numerator_valuation(N, p), 0, 0, Fraction(0), [], None, 0, "error", f"{type(exc).__name__}: {exc} (exit {code})")


def mazur_sweep(N_max: int, primes: list[int] | None = None, jobs: int = 1, cache_dir=None) -> list[MazurRow]:
    """Analyze every prime N <= N_max and every p dividing the numerator of (N - 1)/12."""
    work = [(N, p, cache_dir) for N, p in sweep_pairs(N_max, primes)]
    if jobs > 1 and len(work) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_sweep_one, work))
    return [_sweep_one(w) for w in work]


def _to_int(num: int, shift: int, p: int) -> int:
    if shift <= 0:
        return num * p ** (-shift)
    if num % p**shift:
        raise InvariantViolation("eigenvalue is not integral over the orbit's ring of integers")
    return num // p**shift


def export_table(comp: EisensteinComponent, orbits: list[EigenOrbit]) -> dict:
    """EigenTable (as a JSON-ready dict) of the Eisenstein and cuspidal eigensystems.

    Supported when at most one orbit has degree > 1 and that orbit has
    degree 2 with a generator presentation of its ring of integers.
    Values over the extension are coordinates in the basis (1, gamma) of
    the presented ring; the two conjugate systems use gamma and tr - gamma.
    """
    from .tables import SCHEMA_VERSION

    p = comp.prime
    big = [o for o in orbits if o.degree > 1]
    if len(big) > 1 or (big and big[0].degree != 2):
        raise ExportUnsupported("export needs all orbits of degree 1 except at most one of degree 2")
    ext = None
    if big:
        cert = big[0].qp_factor.certificate
        if cert.generator is None:
            raise ExportUnsupported("no presentation of the orbit's ring of integers")
        ext = list(cert.generator_minpoly)
    k = min([comp.precision] + [o.factor.precision for o in orbits])
    q = p**k

    def wrap(v: int):
        return str(v % q) if ext is None else [str(v % q), "0"]

    systems = [{"label": "eis", "values": [wrap(1 + ell) for ell in comp.generators]}]
    for idx, o in enumerate(orbits):
        B = pm.reduce(o.basis, q)
        blocks = {ell: pm.restrict(pm.reduce(comp.hecke[ell], q), B, p, k) for ell in comp.generators}
        if o.degree == 1:
            systems.append({"label": f"f{idx}", "values": [wrap(blocks[ell][0][0]) for ell in comp.generators]})
            continue
        coeffs, s = o.qp_factor.certificate.generator
        gamma_num = pm.poly_at_matrix(list(coeffs), pm.reduce(o.theta_block, q), q)
        cols = pm.transpose([_flatten(pm.identity(2)), _flatten(gamma_num)])
        trace = (-ext[1]) % q
        first, second = [], []
        for ell in comp.generators:
            (u, y), shift, prec = pm.solve(cols, _flatten(blocks[ell]), p, k)
            if prec < 1:
                raise PrecisionExhausted("eigenvalue coordinates not determined at this precision")
            x0 = _to_int(u, shift, p)
            x1 = _to_int(y, shift - s, p)
            first.append([str(x0 % q), str(x1 % q)])
            second.append([str((x0 + x1 * trace) % q), str(-x1 % q)])
        systems.append({"label": f"f{idx}a", "values": first})
        systems.append({"label": f"f{idx}b", "values": second})
    return {
        "schema_version": SCHEMA_VERSION,
        "prime": str(p),
        "precision": str(k),
        "ext_modulus": [str(c % q) for c in ext] if ext else None,
        "generators": [f"T{ell}" for ell in comp.generators],
        "systems": systems,
        "distinguished": "eis",
    }
