"""
Verification Service
Claim catalogue for a desk-scale campaign and the checks that settle each claim
"""

import logging
import time
from typing import Any, Callable, Dict, List, Optional

from app.models.campaign import CampaignConfig, ClaimOutcome, ClaimRecord, ClaimSpec, ClaimStatus
from app.models.combinatorics import InterpretationCheck, PhyloFlavor
from app.models.linalg import ExactMatrix, TPReport
from app.models.roots import Sign
from app.models.series import WardSpecialization
from app.services.combinatorial_oracles import check_interpretation, iter_ternary_trees, phi, psi
from app.services.exact_linalg import all_minors_nonneg, coeffwise_hankel_tp, neville_tp_test
from app.services.exceptions import CertificationError, GuardExceededError, UnknownKindError, WorkbenchError
from app.services.generating_functions import (
    check_generating_function,
    identity_instance,
    stirling_t_fraction,
    verify_tree_identity,
    ward_polynomials,
)
from app.services.poly_analysis import (
    certify_roots,
    derivative_quadratic,
    discriminant_sign,
    hat_boundary_values,
    hat_sequence,
    left_half_plane_fraction,
    log_concave_rows,
    normalized_root_cloud,
    numeric_roots,
    real_root_count,
    row_poly,
    subdiagonal_closed_forms,
)
from app.services.triangle_engine import (
    TriangleService,
    binomial_matrix,
    matmul,
    r_associated,
    reverse_rows,
    stirling_second_order,
)

logger = logging.getLogger(__name__)

triangle_service = TriangleService()

GOLDEN_ROWS = {
    ("cycle", 2, 8): [0, 40320, 623376, 3678840, 11098780, 18858840, 18288270, 9459450, 2027025],
    ("subset", 2, 5): [0, 1, 56, 490, 1260, 945],
    ("subset", 3, 8): [0, 1, 1969, 549549, 57962905, 3073270200, 89625135600, 1394168776000, 9161680528000],
    ("quasi-cycle", 3, 2): [34, 6],
    ("quasi-subset", 4, 3): [5650, 124, 1],
}

NONREAL_START = {"cycle": 3, "subset": 4}
NONREAL_N_MAX = 15
MATRIX_IDENTITY_ROWS = 15
SHIFT_N_MAX = 10
ROUND_TRIP_MAX_N = 6
BINOMIAL_N_MAX = 8
SERIES_WARD_MAX_N = 5
DERANGEMENT_LETTERS = 9


def _trim_zeros(row: List[int]) -> List[int]:
    out = list(row)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _tp_outcome(report: TPReport, cap: Dict[str, Any]) -> ClaimOutcome:
    cap = {**cap, **report.caps}
    if report.is_tp:
        return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap, detail=f"method {report.method.value}")
    return ClaimOutcome(
        status=ClaimStatus.FALSIFIED,
        cap=cap,
        witness=report.witness.model_dump(),
        detail=f"negative minor of order {report.witness.order}",
    )


def _interpretation_outcome(check: InterpretationCheck) -> ClaimOutcome:
    cap = dict(check.params)
    if check.passed:
        return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap)
    witness = {"mismatches": [list(m) for m in check.mismatches[:10]]}
    return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness=witness)


# Checks. Each takes plain keyword parameters and returns a ClaimOutcome so
# that a ClaimSpec can be shipped to a worker process.

def check_golden_row(kind: str, r: int, n: int, row: List[int]) -> ClaimOutcome:
    T = triangle_service.triangle_for(kind, r, n)
    got = _trim_zeros(T.row(n))
    cap = {"kind": kind, "r": r, "n": n}
    if got == _trim_zeros(row):
        return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap)
    return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness={"row": got, "expected": row})


def check_tp(kind: str, r: int, size: int, reversed: bool = False, minor_search_limit: Optional[int] = None) -> ClaimOutcome:
    T = triangle_service.triangle_for(kind, r, size - 1, reversed=reversed)
    report = neville_tp_test(ExactMatrix.from_rows(T.leading(size)), minor_search_limit)
    return _tp_outcome(report, {"kind": kind, "r": r, "size": size, "reversed": reversed})


def check_minor_oracle(kind: str, r: int, size: int, minor_search_limit: Optional[int] = None) -> ClaimOutcome:
    """Neville verdict against the exhaustive minor search on the same leading block"""
    T = triangle_service.triangle_for(kind, r, size - 1)
    M = ExactMatrix.from_rows(T.leading(size))
    neville = neville_tp_test(M, minor_search_limit)
    exhaustive = all_minors_nonneg(M, size, minor_search_limit)
    cap = {"kind": kind, "r": r, "size": size, **exhaustive.caps}
    if neville.verdict != exhaustive.verdict:
        witness = {"neville": neville.verdict.value, "minors": exhaustive.verdict.value}
        return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness=witness, detail="verdicts disagree")
    return _tp_outcome(exhaustive, cap)


def _hankel_polys(kind: str, r: int, count: int):
    T = triangle_service.triangle_for(kind, r, count - 1)
    return [row_poly(T, n) for n in range(count)]


def check_hankel(kind: str, r: int, size: int, minor_order: int, start: int = 0,
                 minor_search_limit: Optional[int] = None) -> ClaimOutcome:
    polys = _hankel_polys(kind, r, start + 2 * size - 1)[start:]
    report = coeffwise_hankel_tp(polys, size, minor_order, minor_search_limit)
    return _tp_outcome(report, {"kind": kind, "r": r, "start": start})


def check_root_certificates(family: str, n_max: int) -> ClaimOutcome:
    cap = {"family": family, "n_max": n_max}
    try:
        certificates = certify_roots(family, n_max)
    except CertificationError as e:
        return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness={"n": e.n, "clause": e.clause}, detail=str(e))
    return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap, detail=f"{len(certificates)} certificates")


def check_hat_boundaries(kind: str, n_max: int) -> ClaimOutcome:
    cap = {"kind": kind, "n_max": n_max}
    for n, p in enumerate(hat_sequence(kind, n_max)):
        got = (p.evaluate(0), p.evaluate(-1))
        expected = hat_boundary_values(kind, n)
        if got != expected:
            witness = {"n": n, "values": list(got), "expected": list(expected)}
            return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness=witness)
    return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap)


def check_discriminant(kind: str, r: int, n_max: int) -> ClaimOutcome:
    cap = {"kind": kind, "r": r, "n_min": 3, "n_max": n_max}
    for n in range(3, n_max + 1):
        sign = discriminant_sign(r, n, kind)
        if sign != Sign.NEGATIVE:
            return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness={"n": n, "sign": sign.value})
    return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap)


def check_derivative_quadratic(kind: str, r: int, n_max: int) -> ClaimOutcome:
    signs = [derivative_quadratic(kind, r, n).sign.value for n in range(3, n_max + 1)]
    detail = ", ".join(f"n={n}: {s}" for n, s in enumerate(signs, start=3))
    return ClaimOutcome(status=ClaimStatus.OBSERVED, cap={"kind": kind, "r": r, "n_max": n_max}, detail=detail)


def check_subdiagonals(r: int, n_max: int) -> ClaimOutcome:
    T = triangle_service.triangle_for("cycle", r, n_max)
    cap = {"r": r, "n_max": n_max}
    try:
        for n in range(3, n_max + 1):
            subdiagonal_closed_forms(r, n, T)
    except CertificationError as e:
        return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness={"n": e.n, "clause": e.clause})
    return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap)


def check_real_rooted(kind: str, r: int, n_max: int) -> ClaimOutcome:
    """Every zero of p_n/x is real, counted exactly with multiplicity"""
    T = triangle_service.triangle_for(kind, r, n_max)
    cap = {"kind": kind, "r": r, "n_max": n_max}
    for n in range(1, n_max + 1):
        q = row_poly(T, n).divide_by_x()
        real = real_root_count(q, multiplicity=True)
        if real != q.degree:
            return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness={"n": n, "real_zeros": real, "degree": q.degree})
    return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap)


def check_nonreal_zeros(kind: str, r: int, n_min: int, n_max: int, precision_bits: int) -> ClaimOutcome:
    """Every p_n/x with n_min ≤ n ≤ n_max has a nonreal zero; numeric real counts must match Sturm"""
    T = triangle_service.triangle_for(kind, r, n_max)
    cap = {"kind": kind, "r": r, "n_min": n_min, "n_max": n_max, "precision_bits": precision_bits}
    for n in range(n_min, n_max + 1):
        q = row_poly(T, n).divide_by_x()
        roots = numeric_roots(q, precision_bits)
        numeric_real = sum(1 for root in roots if root.is_real)
        exact_real = real_root_count(q, multiplicity=True)
        if numeric_real != exact_real:
            witness = {"n": n, "numeric_real": numeric_real, "exact_real": exact_real}
            return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness=witness, detail="real-zero counts disagree")
        if exact_real == q.degree:
            return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness={"n": n, "real_zeros": exact_real})
    return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap)


def check_left_half_plane(kind: str, r: int, n: int, precision_bits: int) -> ClaimOutcome:
    records = normalized_root_cloud(kind, r, [n], precision_bits)
    fraction = left_half_plane_fraction(records)
    cap = {"kind": kind, "r": r, "n": n, "precision_bits": precision_bits}
    return ClaimOutcome(status=ClaimStatus.OBSERVED, cap=cap, detail=f"{fraction:.6f} of {len(records)} zeros with Re ≤ 0")


def check_log_concave(kind: str, r: int, n_max: int) -> ClaimOutcome:
    report = log_concave_rows(triangle_service.triangle_for(kind, r, n_max), n_max)
    cap = {"kind": kind, "r": r, "n_max": n_max}
    if report.passed:
        return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap)
    first = report.failures[0]
    return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness=first.model_dump())


def check_oracle(
    name: str,
    n_max: int,
    r: int = 2,
    flavor: str = PhyloFlavor.CYCLIC.value,
    letters: Optional[int] = None,
    explicit: bool = False,
) -> ClaimOutcome:
    return _interpretation_outcome(check_interpretation(name, n_max, r, PhyloFlavor(flavor), letters, explicit))


def check_round_trip(n_max: int) -> ClaimOutcome:
    """Ψ(Φ(T)) = T for every primed increasing ternary tree up to n_max"""
    checked = 0
    for n in range(n_max + 1):
        for T in iter_ternary_trees(n, primed=True):
            checked += 1
            back = psi(phi(T))
            if back != T:
                return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap={"n_max": n_max},
                                    witness={"tree": str(T), "image": str(back)})
    return ClaimOutcome(status=ClaimStatus.VERIFIED, cap={"n_max": n_max, "trees": checked})


def check_series(name: str, n_max: int, flavor: str = PhyloFlavor.CYCLIC.value) -> ClaimOutcome:
    return _interpretation_outcome(check_generating_function(name, n_max, PhyloFlavor(flavor)))


def check_tree_identity(name: str, order: int, k: int = 2) -> ClaimOutcome:
    phi_hat, chi = identity_instance(name, order, k)
    label = f"{name}(k={k})" if name == "power" else name
    report = verify_tree_identity(phi_hat, chi, order, label)
    cap = {"instance": label, "order": order}
    if report.passed:
        return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap)
    return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness=report.model_dump())


def check_t_fraction(order: int) -> ClaimOutcome:
    fraction = stirling_t_fraction(order)
    ward = ward_polynomials(order + 1, WardSpecialization.SUBSET)
    for n in range(1, order + 1):
        if fraction[n] != ward[n]:
            witness = {"n": n, "t_fraction": list(fraction[n].coeffs), "ward": list(ward[n].coeffs)}
            return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap={"order": order}, witness=witness)
    return ClaimOutcome(status=ClaimStatus.VERIFIED, cap={"order": order})


def _matrix_identity_sides(name: str, n_max: int):
    if name == "cycle-eulerian":
        left = reverse_rows(triangle_service.triangle_for("cycle", 2, n_max))
        return left, matmul(triangle_service.triangle_for("eulerian", 2, n_max), binomial_matrix(1, n_max))
    if name == "subset-eulerian":
        left = reverse_rows(triangle_service.triangle_for("subset", 2, n_max))
        shifted = triangle_service.triangle_for("eulerian-shifted-reversed", 2, n_max)
        return left, matmul(shifted, binomial_matrix(1, n_max))
    if name == "quasi-cycle-eulerian":
        return triangle_service.triangle_for("quasi-cycle", 2, n_max), triangle_service.triangle_for("eulerian", 2, n_max)
    left = triangle_service.triangle_for("quasi-subset", 2, n_max)
    return left, triangle_service.triangle_for("eulerian-shifted-reversed", 2, n_max)


MATRIX_IDENTITIES = ["cycle-eulerian", "subset-eulerian", "quasi-cycle-eulerian", "quasi-subset-eulerian"]


def check_matrix_identity(name: str, n_max: int) -> ClaimOutcome:
    left, right = _matrix_identity_sides(name, n_max)
    for n in range(n_max + 1):
        if left.row(n) != right.row(n):
            witness = {"n": n, "left": left.row(n), "right": right.row(n)}
            return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap={"identity": name, "n_max": n_max}, witness=witness)
    return ClaimOutcome(status=ClaimStatus.VERIFIED, cap={"identity": name, "n_max": n_max})


def check_second_order_recurrence(kind: str, n_max: int) -> ClaimOutcome:
    closed = stirling_second_order(kind, n_max)
    general = triangle_service.triangle_for(kind, 2, n_max)
    for n in range(n_max + 1):
        if closed.row(n) != general.row(n):
            return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap={"kind": kind, "n_max": n_max},
                                witness={"n": n, "closed": closed.row(n), "general": general.row(n)})
    return ClaimOutcome(status=ClaimStatus.VERIFIED, cap={"kind": kind, "n_max": n_max})


def check_associated_shift(kind: str, r: int, n_max: int) -> ClaimOutcome:
    """T^(r)(n,k) equals the r-associated number at (n + (r−1)k, k)"""
    T = triangle_service.triangle_for(kind, r, n_max)
    assoc = r_associated(kind, r, r * n_max)
    cap = {"kind": kind, "r": r, "n_max": n_max}
    for n in range(n_max + 1):
        for k in range(n + 1):
            if T.entry(n, k) != assoc.entry(n + (r - 1) * k, k):
                return ClaimOutcome(status=ClaimStatus.FALSIFIED, cap=cap, witness={"n": n, "k": k})
    return ClaimOutcome(status=ClaimStatus.VERIFIED, cap=cap)


CHECKS: Dict[str, Callable[..., ClaimOutcome]] = {
    "golden-row": check_golden_row,
    "tp": check_tp,
    "minor-oracle": check_minor_oracle,
    "hankel": check_hankel,
    "root-certificates": check_root_certificates,
    "hat-boundaries": check_hat_boundaries,
    "discriminant": check_discriminant,
    "derivative-quadratic": check_derivative_quadratic,
    "subdiagonals": check_subdiagonals,
    "real-rooted": check_real_rooted,
    "nonreal-zeros": check_nonreal_zeros,
    "left-half-plane": check_left_half_plane,
    "log-concave": check_log_concave,
    "oracle": check_oracle,
    "round-trip": check_round_trip,
    "series": check_series,
    "tree-identity": check_tree_identity,
    "t-fraction": check_t_fraction,
    "matrix-identity": check_matrix_identity,
    "second-order-recurrence": check_second_order_recurrence,
    "associated-shift": check_associated_shift,
}


# Claim catalogue

def _claim(claim_id: str, anchor: str, check: str, expected: ClaimStatus = ClaimStatus.VERIFIED,
           full_scale_cap: Optional[str] = None, **params) -> ClaimSpec:
    return ClaimSpec(id=claim_id, anchor=anchor, check=check, params=params, expected=expected,
                     full_scale_cap=full_scale_cap)


def _golden_claims() -> List[ClaimSpec]:
    return [
        _claim(f"golden/{kind}/r={r}/n={n}", f"printed table of {kind} r={r}, row {n}", "golden-row",
               kind=kind, r=r, n=n, row=row)
        for (kind, r, n), row in GOLDEN_ROWS.items()
    ]


def _tp_claims(config: CampaignConfig, limit: Optional[int]) -> List[ClaimSpec]:
    claims = []
    for family in config.families:
        claims.append(_claim(
            f"tp/{family.kind}/r={family.r}", f"total positivity of the {family.kind} triangle of order r",
            "tp", full_scale_cap="70x70", kind=family.kind, r=family.r, size=config.tp_size,
            minor_search_limit=limit,
        ))
        if family.r <= 3:
            size = min(config.minor_cross_check_size, config.tp_size)
            claims.append(_claim(
                f"tp-minors/{family.kind}/r={family.r}", f"total positivity of the {family.kind} triangle, every minor",
                "minor-oracle", kind=family.kind, r=family.r, size=size, minor_search_limit=limit,
            ))

    for kind in ("eulerian", "eulerian-shifted-reversed"):
        for r in (2, 3):
            claims.append(_claim(
                f"tp/{kind}/r={r}", f"total positivity of the {kind} triangle of order r", "tp",
                full_scale_cap="512x512", kind=kind, r=r, size=config.tp_size, minor_search_limit=limit,
            ))
    for reversed_ in (False, True):
        suffix = "-reversed" if reversed_ else ""
        claims.append(_claim(
            f"tp/ordered-phylo{suffix}", f"total positivity of the ordered phylogenetic triangle{suffix}",
            "tp", kind="ordered-phylo", r=1, size=config.tp_size, reversed=reversed_, minor_search_limit=limit,
        ))
    return claims


def _reversed_tp_claims(config: CampaignConfig, limit: Optional[int]) -> List[ClaimSpec]:
    anchor = "total positivity of the row-reversed triangle"
    claims = []
    for kind in ("cycle", "subset"):
        claims.append(_claim(
            f"tp-reversed/{kind}/r=2", anchor, "tp", full_scale_cap="70x70",
            kind=kind, r=2, size=config.tp_size, reversed=True, minor_search_limit=limit,
        ))
    claims.append(_claim(
        "tp-reversed/cycle/r=3", f"{anchor}: fails within the leading 6x6 block", "tp", ClaimStatus.FALSIFIED,
        kind="cycle", r=3, size=6, reversed=True, minor_search_limit=limit,
    ))
    claims.append(_claim(
        "tp-reversed/subset/r=3/size=11", f"{anchor}: passes at 11x11", "tp",
        kind="subset", r=3, size=11, reversed=True, minor_search_limit=limit,
    ))
    claims.append(_claim(
        "tp-reversed/subset/r=3/size=12", f"{anchor}: fails at 12x12 on rows 5..11, columns 0..6", "tp",
        ClaimStatus.FALSIFIED, kind="subset", r=3, size=12, reversed=True, minor_search_limit=limit,
    ))
    for kind in ("cycle", "subset"):
        for r in (4, 5, 6):
            claims.append(_claim(
                f"tp-reversed/{kind}/r={r}", f"{anchor}: a negative 2x2 minor", "tp", ClaimStatus.FALSIFIED,
                kind=kind, r=r, size=4, reversed=True, minor_search_limit=limit,
            ))
    for kind in ("quasi-cycle", "quasi-subset"):
        for r in range(2, 7):
            claims.append(_claim(
                f"tp-reversed/{kind}/r={r}", "total positivity of the reversed quasi-Eulerian triangle", "tp",
                kind=kind, r=r, size=config.tp_size, reversed=True, minor_search_limit=limit,
            ))
    return claims


def _hankel_claims(config: CampaignConfig, limit: Optional[int]) -> List[ClaimSpec]:
    size, order = config.hankel_size, config.hankel_minor_order
    anchor = "coefficientwise Hankel total positivity of the row polynomials"
    claims = [
        _claim(f"hankel/cycle/r={r}", anchor, "hankel", full_scale_cap="9x9 Hankel, r <= 10",
               kind="cycle", r=r, size=size, minor_order=order, minor_search_limit=limit)
        for r in range(2, 6)
    ]
    claims += [
        _claim(f"hankel/quasi-cycle/r={r}", "coefficientwise Hankel total positivity of the quasi-Eulerian polynomials",
               "hankel", full_scale_cap="9x9 Hankel", kind="quasi-cycle", r=r, size=size, minor_order=order,
               minor_search_limit=limit)
        for r in range(3, 6)
    ]
    claims.append(_claim(
        "hankel/ordered-phylo", "coefficientwise Hankel total positivity of the ordered phylogenetic polynomials",
        "hankel", kind="ordered-phylo", r=1, size=size, minor_order=order, minor_search_limit=limit,
    ))
    claims += [
        _claim(f"hankel/subset/r={r}", f"{anchor}: the subset sequence has a minor with negative coefficients",
               "hankel", ClaimStatus.FALSIFIED, kind="subset", r=r, size=3, minor_order=3, start=1,
               minor_search_limit=limit)
        for r in range(3, 6)
    ]
    return claims


def _root_claims(config: CampaignConfig) -> List[ClaimSpec]:
    claims = [
        _claim(f"roots/{family}", "real, simple, interlacing zeros in (-1, 0)", "root-certificates",
               full_scale_cap="n <= 25", family=family, n_max=config.root_n_max)
        for family in ("cycle2", "subset2", "orderedPhylo")
    ]
    claims += [
        _claim(f"roots/hat-boundaries/{kind}", "boundary values of the reduced polynomials at 0 and -1",
               "hat-boundaries", kind=kind, n_max=config.boundary_n_max)
        for kind in ("cycle", "subset")
    ]
    n_max = config.discriminant_n_max
    claims += [
        _claim(f"roots/discriminant/cycle/r={r}", "negative discriminant of the derivative quadratic",
               "discriminant", kind="cycle", r=r, n_max=n_max)
        for r in range(3, 7)
    ]
    claims += [
        _claim(f"roots/discriminant/subset/r={r}", "negative discriminant of the derivative quadratic",
               "discriminant", kind="subset", r=r, n_max=n_max)
        for r in range(4, 7)
    ]
    claims.append(_claim(
        "roots/derivative-quadratic/subset/r=3", "sign of the derivative quadratic discriminant, reported only",
        "derivative-quadratic", ClaimStatus.OBSERVED, kind="subset", r=3, n_max=n_max,
    ))
    claims += [
        _claim(f"roots/subdiagonals/r={r}", "closed forms of the first two subdiagonals", "subdiagonals",
               r=r, n_max=n_max)
        for r in range(3, 7)
    ]
    nonreal_n_max = min(config.root_n_max, NONREAL_N_MAX)
    for kind, r in (("cycle", 3), ("cycle", 4), ("subset", 3), ("subset", 4)):
        claims.append(_claim(
            f"roots/nonreal/{kind}/r={r}", "nonreal zeros of the row polynomials for r >= 3", "nonreal-zeros",
            kind=kind, r=r, n_min=NONREAL_START[kind], n_max=nonreal_n_max, precision_bits=config.precision_bits,
        ))
    for kind in ("cycle", "subset"):
        claims.append(_claim(
            f"roots/left-half-plane/{kind}/r=3", "zeros lie in the left half-plane, reported only",
            "left-half-plane", ClaimStatus.OBSERVED, kind=kind, r=3, n=config.root_n_max,
            precision_bits=config.precision_bits,
        ))
    return claims


def _log_concave_claims(config: CampaignConfig) -> List[ClaimSpec]:
    return [
        _claim(f"log-concave/{family.kind}/r={family.r}", "log-concavity of every row", "log-concave",
               full_scale_cap="1000 rows", kind=family.kind, r=family.r, n_max=config.log_concave_n_max)
        for family in config.families
        if family.r <= 5
    ]


def _oracle_claims(config: CampaignConfig) -> List[ClaimSpec]:
    n_max = config.oracle_n_max
    letters = min(2 * n_max, DERANGEMENT_LETTERS)
    claims = [
        _claim("oracle/I", "derangements by cycle count", "oracle", name="I", n_max=letters, letters=letters),
        _claim("oracle/II", "marked Stirling words", "oracle", name="II", n_max=n_max),
        _claim("oracle/III", "edge-marked increasing ternary trees", "oracle", name="III", n_max=n_max),
        _claim("oracle/IV", "vertex-marked increasing ordered trees", "oracle", name="IV", n_max=n_max),
    ]
    for flavor in PhyloFlavor:
        claims.append(_claim(f"oracle/V/{flavor.value}", f"{flavor.value} phylogenetic trees", "oracle",
                             name="V", n_max=min(n_max, 6), flavor=flavor.value,
                             explicit=flavor != PhyloFlavor.UNORDERED))
        claims.append(_claim(f"oracle/ward/{flavor.value}", f"Ward polynomial specialization, {flavor.value}",
                             "oracle", name="ward", n_max=n_max, flavor=flavor.value))
    claims += [
        _claim("oracle/r-general/r=3", "consecutive ascents of order-r Stirling words", "oracle",
               name="r-general", n_max=min(n_max, 4), r=3),
        _claim("oracle/r-general/r=4", "consecutive ascents of order-r Stirling words", "oracle",
               name="r-general", n_max=min(n_max, 3), r=4),
        _claim("oracle/eulerian-trees", "multivariate Eulerian polynomials via increasing trees", "oracle",
               name="eulerian-trees", n_max=n_max),
        _claim("oracle/eulerian-trees-cycle", "cycle rows from the multivariate Eulerian polynomial at (x, 1+x, 1+x)",
               "oracle", name="eulerian-trees-cycle", n_max=n_max),
        _claim("oracle/eulerian-trees-subset", "subset rows from the multivariate Eulerian polynomial at (x, x, 1+x)",
               "oracle", name="eulerian-trees-subset", n_max=n_max),
        _claim("oracle/binomial", "cycle triangle as a binomial transform of the Eulerian triangle", "oracle",
               name="binomial", n_max=BINOMIAL_N_MAX),
        _claim("oracle/round-trip", "bijection between primed ternary trees and ordered trees", "round-trip",
               n_max=min(n_max, ROUND_TRIP_MAX_N)),
    ]
    return claims


def _identity_claims(config: CampaignConfig) -> List[ClaimSpec]:
    order = config.series_order
    claims = [
        _claim(f"series/{name}", "generating functions against enumerations and triangles", "series",
               name=name, n_max=min(order, 6))
        for name in ("ordered-trees", "ternary-trees", "t-fraction")
    ]
    claims += [
        _claim(f"series/ward/{flavor.value}", "specialized Ward series against phylogenetic trees", "series",
               name="ward", n_max=min(order, SERIES_WARD_MAX_N), flavor=flavor.value)
        for flavor in PhyloFlavor
    ]
    claims += [
        _claim(f"tree-identity/{name}", "tree-series composition identities", "tree-identity", name=name, order=order)
        for name in ("ternary", "binary", "cyclic")
    ]
    claims += [
        _claim(f"tree-identity/power/k={k}", "tree-series composition identities, power instance",
               "tree-identity", name="power", order=order, k=k)
        for k in (3, 4)
    ]
    claims.append(_claim("t-fraction/ward", "T-fraction expansion equals the Ward polynomials", "t-fraction",
                         order=order))
    claims += [
        _claim(f"matrix-identity/{name}", "second-order triangles through Eulerian products", "matrix-identity",
               name=name, n_max=MATRIX_IDENTITY_ROWS)
        for name in MATRIX_IDENTITIES
    ]
    claims += [
        _claim(f"recurrence/second-order/{kind}", "closed second-order recurrences", "second-order-recurrence",
               kind=kind, n_max=MATRIX_IDENTITY_ROWS)
        for kind in ("cycle", "subset")
    ]
    claims += [
        _claim(f"recurrence/associated-shift/{kind}/r={r}", "column shift of the r-associated numbers",
               "associated-shift", kind=kind, r=r, n_max=SHIFT_N_MAX)
        for kind in ("cycle", "subset")
        for r in (3, 4)
    ]
    return claims


# Single claims for the command line and the HTTP routes

def _check_kind(kind: str) -> None:
    if kind not in TriangleService.KINDS:
        raise UnknownKindError(kind, TriangleService.KINDS)


def tp_claim(kind: str, r: int, size: int, reversed: bool = False, minor_search_limit: Optional[int] = None) -> ClaimSpec:
    _check_kind(kind)
    suffix = "-reversed" if reversed else ""
    return _claim(f"tp{suffix}/{kind}/r={r}/size={size}", f"total positivity of the {kind}{suffix} triangle", "tp",
                  kind=kind, r=r, size=size, reversed=reversed, minor_search_limit=minor_search_limit)


def hankel_claim(kind: str, r: int, size: int, minor_order: int, minor_search_limit: Optional[int] = None) -> ClaimSpec:
    _check_kind(kind)
    return _claim(f"hankel/{kind}/r={r}/size={size}", "coefficientwise Hankel total positivity", "hankel",
                  kind=kind, r=r, size=size, minor_order=minor_order, minor_search_limit=minor_search_limit)


def roots_claims(kind: str, r: int, n_max: int, precision_bits: int) -> List[ClaimSpec]:
    """
    Orders 1 and 2 (and the ordered phylogenetic rows) get exact real-rootedness
    certificates; from order 3 on the discriminant criterion and numeric zeros
    are used, and the half-plane location is only observed.
    """
    if kind == "ordered-phylo":
        return [_claim("roots/orderedPhylo", "real, simple, interlacing zeros in (-1, 0)", "root-certificates",
                       family="orderedPhylo", n_max=n_max)]
    if kind not in ("cycle", "subset"):
        raise UnknownKindError(kind, ["cycle", "subset", "ordered-phylo"])
    if r == 1:
        return [_claim(f"roots/real/{kind}/r=1", "real zeros of the classical row polynomials", "real-rooted",
                       kind=kind, r=1, n_max=n_max)]
    if r == 2:
        return [_claim(f"roots/{kind}2", "real, simple, interlacing zeros in (-1, 0)", "root-certificates",
                       family=f"{kind}2", n_max=n_max)]

    claims = []
    if n_max >= 3:
        if kind == "subset" and r == 3:
            claims.append(_claim("roots/derivative-quadratic/subset/r=3", "sign of the derivative quadratic discriminant, reported only",
                                 "derivative-quadratic", ClaimStatus.OBSERVED, kind=kind, r=r, n_max=n_max))
        else:
            claims.append(_claim(f"roots/discriminant/{kind}/r={r}", "negative discriminant of the derivative quadratic",
                                 "discriminant", kind=kind, r=r, n_max=n_max))
    if n_max >= NONREAL_START[kind]:
        claims.append(_claim(f"roots/nonreal/{kind}/r={r}", "nonreal zeros of the row polynomials for r >= 3",
                             "nonreal-zeros", kind=kind, r=r, n_min=NONREAL_START[kind], n_max=n_max,
                             precision_bits=precision_bits))
    if n_max >= 1:
        claims.append(_claim(f"roots/left-half-plane/{kind}/r={r}", "zeros lie in the left half-plane, reported only",
                             "left-half-plane", ClaimStatus.OBSERVED, kind=kind, r=r, n=n_max,
                             precision_bits=precision_bits))
    return claims


def build_claims(config: CampaignConfig, minor_search_limit: Optional[int] = None) -> List[ClaimSpec]:
    """Every claim of a campaign, in report order"""
    claims = (
        _golden_claims()
        + _tp_claims(config, minor_search_limit)
        + _reversed_tp_claims(config, minor_search_limit)
        + _hankel_claims(config, minor_search_limit)
        + _root_claims(config)
        + _log_concave_claims(config)
        + _oracle_claims(config)
        + _identity_claims(config)
    )
    ids = [claim.id for claim in claims]
    if len(ids) != len(set(ids)):
        raise WorkbenchError("Duplicate claim ids in campaign")
    logger.info(f"Campaign has {len(claims)} claims")
    return claims


def run_claim(spec: ClaimSpec) -> ClaimRecord:
    """Settle one claim. Guard errors propagate; other domain errors become an error record."""
    check = CHECKS.get(spec.check)
    if check is None:
        raise WorkbenchError(f"Claim {spec.id} names unknown check '{spec.check}'")
    started = time.perf_counter()
    try:
        outcome = check(**spec.params)
    except GuardExceededError:
        logger.error(f"Claim {spec.id} tripped a resource guard")
        raise
    except WorkbenchError as e:
        logger.error(f"Claim {spec.id} failed: {e}")
        outcome = ClaimOutcome(status=ClaimStatus.ERROR, detail=str(e))
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    if outcome.status != spec.expected:
        logger.warning(f"Claim {spec.id}: {outcome.status.value}, expected {spec.expected.value}")
    else:
        logger.debug(f"Claim {spec.id}: {outcome.status.value} in {elapsed_ms} ms")
    return ClaimRecord.from_outcome(spec, outcome, elapsed_ms)
