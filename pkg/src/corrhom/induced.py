"""Completeness, consistency, and the homomorphism induced by a correspondence.

For the graph ``(F, F')`` of a combinatorial map with projections ``p`` and
``q``, the induced homomorphism is

    q~ o p~^{-1} :  im p_*  -->  H_*(Y, B) / q_*(ker p_*)

where ``p~`` and ``q~`` are the maps ``p_*`` and ``q_*`` descend to on
``H_*(F, F') / ker p_*``.  It is always defined; completeness and
consistency only decide whether it can be read as the map induced by a
continuous selector.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .correspondence import (
    CombinatorialMap,
    GridMismatch,
    SampleSet,
    contains_samples,
    graph_pair,
    is_enlargement,
    projection_chain_maps,
)
from .homology import HomHomomorphism, HomologyModule, homology, induced_homomorphism
from .zmodule import (
    AbelianPresentation,
    IntegerMatrix,
    NoSolution,
    Quotient,
    Subgroup,
    hom_kernel,
    quotient_presentation,
    reduce_columns,
    smith_normal_form,
    solve_exact,
    subgroup_contains,
)


class NotEndomorphism(ValueError):
    pass


@dataclass
class DegreeAnalysis:
    """Everything computed for one homological degree."""

    degree: int
    p_matrix: IntegerMatrix
    q_matrix: IntegerMatrix
    ker_p: Subgroup
    ker_q: Subgroup
    im_p: Subgroup
    q_ker_p: Subgroup
    quotient_target: Quotient  # H(Y,B) / q_*(ker p_*)
    source_quotient: Quotient  # H(F,F') / ker p_*
    domain_presentation: AbelianPresentation  # presentation of im p_* in domain_basis
    domain_basis: IntegerMatrix  # im p_* generators in H(X,A) coordinates
    lifts: IntegerMatrix  # H(F,F') coordinates of chosen preimages of domain_basis
    induced_matrix: IntegerMatrix  # columns: images of domain_basis in quotient_target coordinates
    complete: bool
    consistent: bool

    @property
    def rank_p(self) -> int:
        return _free_rank_of_columns(self.p_matrix, self.im_p.ambient)


def _free_rank_of_columns(m: IntegerMatrix, ambient: AbelianPresentation) -> int:
    free_rows = [i for i, o in enumerate(_orders(ambient)) if o == 0]
    if not free_rows or not m.cols:
        return 0
    return smith_normal_form(m.select_rows(free_rows)).rank


def _orders(pres: AbelianPresentation) -> list[int]:
    return pres.orders()


@dataclass
class InducedHomReport:
    map: CombinatorialMap
    graph_homology: HomologyModule
    domain_homology: HomologyModule
    codomain_homology: HomologyModule
    p_star: HomHomomorphism
    q_star: HomHomomorphism
    degrees: list[DegreeAnalysis] = field(repr=False)

    @property
    def complete(self) -> bool:
        return all(d.complete for d in self.degrees)

    @property
    def consistent(self) -> bool:
        return all(d.consistent for d in self.degrees)

    @property
    def ker_p(self) -> list[Subgroup]:
        return [d.ker_p for d in self.degrees]

    @property
    def im_p(self) -> list[Subgroup]:
        return [d.im_p for d in self.degrees]

    @property
    def q_ker_p(self) -> list[Subgroup]:
        return [d.q_ker_p for d in self.degrees]

    @property
    def quotient_target(self) -> list[AbelianPresentation]:
        return [d.quotient_target.presentation for d in self.degrees]

    @property
    def induced_matrix(self) -> list[IntegerMatrix]:
        return [d.induced_matrix for d in self.degrees]

    def rank_p(self, k: int) -> int:
        return self.degrees[k].rank_p

    def evaluate(self, k: int, x) -> list[int]:
        """Induced map applied to ``x`` in ``im p_k`` (given in H_k(X,A) coordinates)."""
        d = self.degrees[k]
        h = preimage(d, list(x))
        y = d.q_matrix.apply(h)
        qt = d.quotient_target
        return qt.presentation.canonical(qt.projection.apply(y))


def preimage(d: DegreeAnalysis, x: list[int]) -> list[int]:
    """Some ``h`` in H(F,F') with ``p_*(h) = x``; NoSolution if ``x`` is not in ``im p_*``."""
    target = d.im_p.ambient
    stacked = d.p_matrix.hstack(target.relations)
    y = solve_exact(stacked, x)
    return y[: d.p_matrix.cols]


def _analyze_degree(k, hg, hx, hy, p_star, q_star) -> DegreeAnalysis:
    G = hg.group(k)
    X = hx.group(k)
    Y = hy.group(k)
    P = p_star[k] if k < len(p_star.matrices) else IntegerMatrix.zeros(X.generators, G.generators)
    Q = q_star[k] if k < len(q_star.matrices) else IntegerMatrix.zeros(Y.generators, G.generators)
    if P.rows != X.generators:
        P = IntegerMatrix.zeros(X.generators, G.generators)
    if Q.rows != Y.generators:
        Q = IntegerMatrix.zeros(Y.generators, G.generators)
    ker_p = hom_kernel(P, G, X)
    ker_q = hom_kernel(Q, G, Y)
    im_p = Subgroup(X, P)
    complete = subgroup_contains(Subgroup.whole(X), im_p)
    consistent = subgroup_contains(ker_p, ker_q)
    q_ker_p = Subgroup(Y, Q @ ker_p.generators_in_ambient)
    qt = quotient_presentation(Y, q_ker_p)
    qs = quotient_presentation(G, ker_p)
    if complete:
        domain_pres = X
        basis = IntegerMatrix.identity(X.generators)
        stacked = P.hstack(X.relations)
        snf = smith_normal_form(stacked)
        cols = [solve_exact(stacked, basis.column(i), snf)[: G.generators] for i in range(X.generators)]
        lifts = IntegerMatrix.from_columns(cols, G.generators)
    else:
        domain_pres = qs.presentation
        lifts = qs.section
        basis = reduce_columns(P @ lifts, X)
    induced = reduce_columns(qt.projection @ Q @ lifts, qt.presentation)
    return DegreeAnalysis(k, P, Q, ker_p, ker_q, im_p, q_ker_p, qt, qs, domain_pres, basis, lifts,
                          induced, complete, consistent)


def analyze(m: CombinatorialMap, domain_homology: HomologyModule | None = None,
            codomain_homology: HomologyModule | None = None, check_chain_maps: bool = True
            ) -> InducedHomReport:
    """Full analysis of the map's graph: homology, projections, flags, and induced map."""
    g = graph_pair(m)
    xpair = domain_homology.pair if domain_homology is not None else m.domain_pair()
    hx = domain_homology if domain_homology is not None else homology(xpair)
    if codomain_homology is not None:
        hy = codomain_homology
    elif m.source_grid == m.target_grid and (m.domain, m.domain_sub) == (m.codomain, m.codomain_sub) \
            and m.respects_pairs:
        hy = hx
    else:
        hy = homology(m.codomain_pair())
    hg = homology(g.pair)
    p_chain, q_chain = projection_chain_maps(g, hx.pair, hy.pair)
    p_star = induced_homomorphism(p_chain, hg, hx, check=check_chain_maps)
    q_star = induced_homomorphism(q_chain, hg, hy, check=check_chain_maps)
    degrees = [_analyze_degree(k, hg, hx, hy, p_star, q_star) for k in range(len(hg.groups))]
    return InducedHomReport(m, hg, hx, hy, p_star, q_star, degrees)


def is_homologically_complete(m: CombinatorialMap | InducedHomReport) -> bool:
    report = m if isinstance(m, InducedHomReport) else analyze(m)
    return report.complete


def is_homologically_consistent(m: CombinatorialMap | InducedHomReport) -> bool:
    report = m if isinstance(m, InducedHomReport) else analyze(m)
    return report.consistent


@dataclass
class ExtensionCheck:
    """Outcome of a homological-extension test with the first failing condition, if any."""

    holds: bool
    failures: list[tuple[int, int, str]] = field(default_factory=list)  # (degree, condition, detail)

    def __bool__(self):
        return self.holds

    @property
    def failed_condition(self) -> int | None:
        return self.failures[0][1] if self.failures else None


def _require_same_pairs(f: CombinatorialMap, g: CombinatorialMap):
    if f.source_grid != g.source_grid or f.target_grid != g.target_grid:
        raise GridMismatch("maps live on different grids")
    if not f.same_pairs(g):
        raise GridMismatch("maps have different domain or codomain pairs")


def verify_homological_extension(f: CombinatorialMap, g: CombinatorialMap,
                                 report_f: InducedHomReport | None = None,
                                 report_g: InducedHomReport | None = None) -> ExtensionCheck:
    """Check whether ``g`` is a homological extension of ``f``.

    Conditions, per degree: (1) ``im p^f <= im p^g``; (2) ``q^g(ker p^g) <=
    q^f(ker p^f)``; (3) the induced map of ``f`` equals ``j o g_* o i``.
    """
    _require_same_pairs(f, g)
    if not (f.respects_pairs and g.respects_pairs):
        bad = "first" if not f.respects_pairs else "second"
        return ExtensionCheck(False, [(-1, 0, f"the {bad} map sends the domain subset outside the "
                                              "codomain subset, so it is not a map of the given pairs")])
    rf = report_f if report_f is not None else analyze(f)
    rg = report_g if report_g is not None else analyze(g, rf.domain_homology, rf.codomain_homology)
    failures = []
    for k, (df, dg) in enumerate(zip(rf.degrees, rg.degrees)):
        if not subgroup_contains(df.im_p, dg.im_p):
            failures.append((k, 1, f"im p_{k} of the first map is not inside im p_{k} of the second"))
            continue
        if not subgroup_contains(dg.q_ker_p, df.q_ker_p):
            failures.append((k, 2, f"q_{k}(ker p_{k}) of the second map is not inside that of the first"))
            continue
        qt = df.quotient_target
        for j in range(df.domain_basis.cols):
            x = df.domain_basis.column(j)
            h = preimage(dg, x)
            y = dg.q_matrix.apply(h)
            via_g = qt.presentation.canonical(qt.projection.apply(y))
            direct = qt.presentation.canonical(df.induced_matrix.column(j))
            if via_g != direct:
                failures.append((k, 3, f"degree {k}: induced maps differ on domain generator {j}"))
                break
    return ExtensionCheck(not failures, failures)


@dataclass
class Verdict:
    kind: str  # "a", "b" or "inconclusive"
    conclusion: str
    failed: list[str] = field(default_factory=list)


def selector_conclusion(m: CombinatorialMap, samples: SampleSet | None = None,
                        enlargement: CombinatorialMap | None = None,
                        report: InducedHomReport | None = None,
                        enlargement_report: InducedHomReport | None = None) -> Verdict:
    """What can be concluded about ``f_*`` for a continuous selector ``f``.

    (b) ``m`` complete and a consistent enlargement of ``m`` is supplied;
    (a) ``m`` complete, consistent, and containing the samples of ``f``.
    Completeness is part of (a) because a map with a continuous selector is
    necessarily complete.
    """
    report = report if report is not None else analyze(m)
    failed = []
    if not report.complete:
        failed.append("not homologically complete")
    if enlargement is None:
        failed.append("no enlargement supplied")
    else:
        erep = enlargement_report if enlargement_report is not None else \
            analyze(enlargement, report.domain_homology, report.codomain_homology)
        if not is_enlargement(m, enlargement):
            failed.append("supplied map is not an enlargement")
        elif not erep.consistent:
            failed.append("enlargement is not homologically consistent")
        elif report.complete:
            return Verdict("b", "induced map equals f_* for every continuous selector f of the "
                           "consistent enlargement")
    has_samples = samples is None or contains_samples(m, samples)
    if not has_samples:
        failed.append("map does not contain the samples")
    if not report.consistent:
        failed.append("not homologically consistent")
    if report.complete and report.consistent and has_samples:
        return Verdict("a", "induced map equals f_* provided f is a continuous selector")
    return Verdict("inconclusive", "hypotheses not met: " + "; ".join(failed), failed)


def _rational_solve(basis: list[list[int]], ncols: int, y: list[int]):
    """Solve ``sum c_j basis_j = y`` over Q; None if no solution."""
    n = len(y)
    aug = [[Fraction(basis[j][i]) for j in range(ncols)] + [Fraction(y[i])] for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(aug[i][ncols] != 0 for i in range(r, n)):
        return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][ncols]
    return sol


def restricted_endomorphism(report: InducedHomReport, k: int) -> list[list[Fraction]]:
    """Matrix of the induced map restricted to ``im p_k``, over the rationals.

    Uses a rational basis of the free part of ``im p_k`` and requires the
    induced map to carry that subspace into itself.
    """
    m = report.map
    if m.source_grid != m.target_grid or (m.domain, m.domain_sub) != (m.codomain, m.codomain_sub) \
            or not m.respects_pairs:
        raise NotEndomorphism("domain and codomain pairs differ")
    d = report.degrees[k]
    if not d.consistent:
        raise NotEndomorphism(f"degree {k} is not consistent; the induced map does not land in H_{k}(X, A)")
    X = d.im_p.ambient
    free = [i for i, o in enumerate(X.orders()) if o == 0]
    # rational basis of im p_k: independent columns of P restricted to free coordinates
    cols = []
    for col in d.p_matrix.columns():
        v = [col[i] for i in free]
        if any(v) and (not cols or _rational_solve(cols, len(cols), v) is None):
            cols.append(v)
    r = len(cols)
    out = [[Fraction(0)] * r for _ in range(r)]
    for j, b in enumerate(cols):
        bfull = [0] * X.generators
        for i, v in zip(free, b):
            bfull[i] = v
        h = preimage(d, bfull)
        img = d.q_matrix.apply(h)
        qt = d.quotient_target
        img = qt.projection.apply(img)
        img_free = [img[i] for i in free]
        c = _rational_solve(cols, r, img_free)
        if c is None:
            raise NotEndomorphism(f"the induced map does not preserve im p_{k}")
        for i in range(r):
            out[i][j] = c[i]
    return out


def nilpotency_check(report: InducedHomReport, k: int) -> bool:
    """True iff the induced map restricted to ``im p_k`` is nilpotent."""
    m = restricted_endomorphism(report, k)
    r = len(m)
    if r == 0:
        return True
    power = [row[:] for row in m]
    for _ in range(r - 1):
        power = [[sum(power[i][t] * m[t][j] for t in range(r)) for j in range(r)] for i in range(r)]
    return all(v == 0 for row in power for v in row)
