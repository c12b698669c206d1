"""Machine checks for every identity the toolkit is built around.

Symbolic checks normalize a relation (or a derived power identity) and
demand the zero element.  Representation checks apply relations to
truncated basis vectors, compare operator blocks, compute joint kernels,
and rebuild the orthonormal basis from the lowest-weight vector.  Each
check returns a CheckReport with the worst residual and the failing
witnesses, serializable as JSON.

A symbolic zero claimed through signature-wise radical arithmetic is
additionally evaluated numerically at three rational points of (0, 1);
signature-wise equality presumes independence of the radical atoms over
the Laurent field, and the numeric guard keeps that assumption honest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import (
    Element,
    Presentation,
    normalize,
    presentation_Sigma,
    relations_S,
    relations_Sigma,
    y,
)
from .rep import (
    RepConfig,
    apply_element,
    basis_state,
    fock_indices,
    is_interior,
    matrix,
    rank_of,
)
from .scalar import DomainError, LaurentPoly, qpochhammer

ONE = LaurentPoly.one()
Q = LaurentPoly.q

GUARD_POINTS = (Fraction(1, 3), Fraction(1, 2), Fraction(3, 5))
KERNEL_SV_TOL = 1e-10
DEFINING_TOL = 1e-12
UNITARY_TOL = 1e-8
NUMERIC_TOL = 1e-12


class ConfigurationError(RuntimeError):
    """The truncation is too small for the requested operator check."""


@dataclass
class CheckReport:
    """Outcome of one check: worst residual, witnesses, pass flag."""

    name: str
    params: dict
    tolerance: float
    max_residual: float = 0.0
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance and not self.witnesses

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "params": self.params,
            "max_residual": self.max_residual,
            "passed": self.passed,
            "witnesses": list(self.witnesses),
        }

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name} {self.params} "
                f"max_residual={self.max_residual:.3e} tol={self.tolerance:.0e}")


def _element_guard_residual(e: Element) -> float:
    """Largest numeric magnitude of an element's coefficients on the guard grid."""
    worst = 0.0
    for _, coeff in e.items():
        for q0 in GUARD_POINTS:
            worst = max(worst, abs(float(coeff.evaluate(q0))))
    return worst


def _sym_params(p: Presentation) -> dict:
    return {"kind": p.kind, "n": p.n, "sphere": p.sphere_reduction}


def _rep_params(c: RepConfig) -> dict:
    return {"n": c.n, "K": c.K, "q0": f"{c.q0.numerator}/{c.q0.denominator}",
            "lambda": [c.lam.real, c.lam.imag], "mode": c.mode}


# -- symbolic checks ---------------------------------------------------------


def check_symbolic_relations(p: Presentation) -> CheckReport:
    """Every defining relation (and star conjugate) realized by the
    presentation must normalize to the zero element."""
    relations = relations_S(p.n) if p.kind == "S" else relations_Sigma(p.n)
    report = CheckReport("symbolic_relations", _sym_params(p), tolerance=0.0)
    for name, rel in relations:
        if name.startswith("sphere") and not p.sphere_reduction:
            continue
        nf = normalize(rel, p)
        if not nf.is_zero():
            residual = _element_guard_residual(nf)
            report.max_residual = max(report.max_residual, residual)
            report.witnesses.append({"relation": name, "normal_form": str(nf),
                                     "residual": residual})
    return report


def lemma_aux_identity(n: int, i: int, m: int) -> Element:
    """LHS - RHS of the lowering/raising power identity

        y_i (y_i*)^m - q^(2m) (y_i*)^m y_i
                     - (1 - q^(2m)) (y_i*)^(m-1) (1 - sum_{k<i} y_k* y_k)

    with exponents 4m in place of 2m when i = n."""
    if not 1 <= i <= n:
        raise DomainError("i must lie in 1..n")
    if m < 1:
        raise DomainError("m must be >= 1")
    step = 4 if i == n else 2
    ys = Element.of(y(i, True))
    lhs = Element.of(y(i)) * ys**m
    tail = Element.one()
    for k in range(1, i):
        tail = tail - Element.of(y(k, True), y(k))
    rhs = ys**m * Element.of(y(i)) * Q(step * m) + ys**(m - 1) * tail * (ONE - Q(step * m))
    return lhs - rhs


def check_lemma_aux(p: Presentation, m_max: int) -> CheckReport:
    """The power identities must normalize to zero for all i and m <= m_max;
    they are stated against the unit sphere, so reduction must be on."""
    if p.kind != "Sigma":
        raise DomainError("the power identities live in the Sigma presentation")
    if not p.sphere_reduction:
        raise DomainError("the power identities require sphere reduction on")
    if m_max < 1:
        raise DomainError("m_max must be >= 1")
    params = dict(_sym_params(p), m_max=m_max)
    report = CheckReport("lemma_aux", params, tolerance=0.0)
    for i in range(1, p.n + 1):
        for m in range(1, m_max + 1):
            nf = normalize(lemma_aux_identity(p.n, i, m), p)
            if not nf.is_zero():
                residual = _element_guard_residual(nf)
                report.max_residual = max(report.max_residual, residual)
                report.witnesses.append({"i": i, "m": m, "normal_form": str(nf),
                                         "residual": residual})
    return report


# -- representation checks ----------------------------------------------------


def _numeric_config(c: RepConfig) -> RepConfig:
    if c.mode == "numeric":
        return c
    return RepConfig(c.n, c.q0, c.lam, c.K, "numeric", c.lam_exact)


def _generator_dense(c: RepConfig, i: int) -> np.ndarray:
    return matrix(Element.of(y(i)), _numeric_config(c)).to_dense()


def joint_kernel_dims(c: RepConfig) -> list[int]:
    """Dimensions of the nested joint kernels of y_1, .., y_k for k = 1..n,
    detected through singular values of the stacked matrices."""
    mats = [_generator_dense(c, i) for i in range(1, c.n + 1)]
    dims = []
    for k in range(1, c.n + 1):
        stacked = np.vstack(mats[:k])
        sv = np.linalg.svd(stacked, compute_uv=False)
        dims.append(int(np.sum(sv < KERNEL_SV_TOL)) + max(0, c.dim - len(sv)))
    return dims


def _joint_kernel_basis(c: RepConfig, k: int) -> np.ndarray:
    """Orthonormal basis (columns) of the joint kernel of y_1..y_k; the
    whole space for k = 0."""
    if k == 0:
        return np.eye(c.dim, dtype=complex)
    stacked = np.vstack([_generator_dense(c, i) for i in range(1, k + 1)])
    _, sv, vh = np.linalg.svd(stacked)
    null_mask = np.ones(c.dim, dtype=bool)
    null_mask[: len(sv)] = sv < KERNEL_SV_TOL
    return vh.conj().T[:, null_mask]


def check_kernel_structure(c: RepConfig) -> CheckReport:
    """dim H_k must equal (K+1)^(n-k); in particular the joint kernel of
    all lowering generators is one-dimensional."""
    dims = joint_kernel_dims(c)
    report = CheckReport("kernel_structure", _rep_params(c), tolerance=0.0)
    for k, got in enumerate(dims, start=1):
        want = (c.K + 1) ** (c.n - k)
        if got != want:
            report.witnesses.append({"k": k, "dim": got, "expected": want})
            report.max_residual = max(report.max_residual, float(abs(got - want)))
    return report


def check_lemma_main(c: RepConfig, k: int) -> CheckReport:
    """Operator identities for A = sum_{i>k} y_i* y_i and B = y_k restricted
    to the joint kernel of y_1..y_{k-1}:

        [B, B*] = (1 - mu) A        A + B*B = 1
        mu A = U A U*  with  U = (BB*)^(-1/2) B,  BB* = 1 - mu A

    with mu = q0^2 for k < n and q0^4 for k = n, compared on interior
    rows and columns."""
    if not 1 <= k <= c.n:
        raise DomainError("k must lie in 1..n")
    if c.K < 2:
        raise DomainError("the operator identities need K >= 2")
    cn = _numeric_config(c)
    mu = float(cn.q0 ** (2 if k < cn.n else 4))

    a_elem = Element.zero()
    for i in range(k + 1, cn.n + 2):
        a_elem = a_elem + Element.of(y(i, True), y(i))
    a_full = matrix(a_elem, cn).to_dense()
    b_full = _generator_dense(cn, k)

    basis = _joint_kernel_basis(cn, k - 1)
    a_h = basis.conj().T @ a_full @ basis
    b_h = basis.conj().T @ b_full @ basis
    bs_h = b_h.conj().T
    eye = np.eye(basis.shape[1], dtype=complex)

    interior = np.zeros(cn.dim, dtype=bool)
    for idx in fock_indices(cn):
        interior[rank_of(idx, cn)] = is_interior(idx, cn)

    def masked_max(residual_h: np.ndarray) -> float:
        lifted = basis @ residual_h @ basis.conj().T
        block = lifted[np.ix_(interior, interior)]
        return float(np.max(np.abs(block))) if block.size else 0.0

    params = dict(_rep_params(c), k=k, mu=mu)
    report = CheckReport("lemma_main", params, tolerance=UNITARY_TOL)

    commutator = b_h @ bs_h - bs_h @ b_h - (1.0 - mu) * a_h
    r1 = masked_max(commutator)
    sphere_defect = a_h + bs_h @ b_h - eye
    r2 = masked_max(sphere_defect)
    for name, residual in (("commutator", r1), ("sphere", r2)):
        if residual > DEFINING_TOL:
            report.witnesses.append({"identity": name, "residual": residual})

    # BB* equals 1 - mu A, which is positive definite wherever the
    # truncation is faithful; the product is lifted back to the basis
    # indices of the kernel subspace and checked on the interior block.
    h_mask = np.abs(np.einsum("ij,ij->i", basis, basis.conj()).real) > 0.5
    both = interior & h_mask
    product = (basis @ (b_h @ bs_h) @ basis.conj().T)[np.ix_(both, both)]
    if product.size:
        if float(np.min(np.linalg.eigvalsh((product + product.conj().T) / 2))) <= 0.0:
            raise ConfigurationError("BB* is not positive definite on the restricted "
                                     "interior; increase the cutoff K")
    s_op = eye - mu * a_h
    evals, evecs = np.linalg.eigh((s_op + s_op.conj().T) / 2)
    if float(evals.min()) <= 0.0:
        raise ConfigurationError("1 - mu A is not positive definite; increase K")
    inv_sqrt = evecs @ np.diag(evals ** -0.5) @ evecs.conj().T
    u_op = inv_sqrt @ b_h
    r3 = masked_max(mu * a_h - u_op @ a_h @ u_op.conj().T)

    report.max_residual = max(r1, r2, r3)
    return report


def check_lowest_weight_basis(c: RepConfig) -> CheckReport:
    """Rebuild |k> from the vacuum by raising and normalizing with
    q-shifted factorials; the Gram matrix must be the identity and every
    constructed vector must coincide with its basis vector."""
    cn = _numeric_config(c)
    grid = [k for k in fock_indices(cn) if all(ki <= cn.K - 1 for ki in k)]
    vacuum = tuple(0 for _ in range(cn.n))
    vectors = []
    report = CheckReport("lowest_weight_basis", _rep_params(c), tolerance=NUMERIC_TOL)
    for k in grid:
        word = Element.one()
        norm = Fraction(1)
        for i, ki in enumerate(k, start=1):
            step = 4 if i == cn.n else 2
            word = word * Element.of(y(i, True)) ** ki
            norm *= qpochhammer(Q(step), Q(step), ki).evaluate(cn.q0)
        raised = apply_element(word, basis_state(cn, vacuum), cn)
        dense = np.zeros(cn.dim, dtype=complex)
        for idx, amp in raised.amplitudes.items():
            dense[rank_of(idx, cn)] = amp
        dense /= np.sqrt(float(norm))
        vectors.append(dense)

        unit = np.zeros(cn.dim, dtype=complex)
        unit[rank_of(k, cn)] = 1.0
        defect = float(np.max(np.abs(dense - unit)))
        report.max_residual = max(report.max_residual, defect)
        if defect > NUMERIC_TOL:
            report.witnesses.append({"k": list(k), "basis_defect": defect})

    stack = np.array(vectors)
    gram = stack.conj() @ stack.T
    gram_defect = float(np.max(np.abs(gram - np.eye(len(grid)))))
    report.max_residual = max(report.max_residual, gram_defect)
    if gram_defect > NUMERIC_TOL:
        report.witnesses.append({"gram_defect": gram_defect})
    return report


def check_relations_in_rep(c: RepConfig, p: Presentation) -> CheckReport:
    """Apply every raw defining relation to every interior basis vector
    (the sphere relation to every vector); residuals must vanish exactly
    in exact mode and within 1e-12 in numeric mode."""
    if p.kind != "Sigma" or p.n != c.n:
        raise DomainError("relations are checked in the matching Sigma presentation")
    if p.sphere_reduction:
        raise DomainError("relations are checked raw: use a sphere-off presentation")
    if c.K < 2:
        raise DomainError("interior checks need K >= 2")
    tolerance = 0.0 if c.mode == "exact" else NUMERIC_TOL
    report = CheckReport("relations_in_rep", _rep_params(c), tolerance=tolerance)
    for name, rel in relations_Sigma(c.n):
        sphere = name.startswith("sphere")
        for k in fock_indices(c):
            if not sphere and not is_interior(k, c):
                continue
            out = apply_element(rel, basis_state(c, k), c)
            if c.mode == "exact":
                if out.is_zero():
                    continue
                residual = max(out.max_abs(q0) for q0 in GUARD_POINTS)
                report.max_residual = max(report.max_residual, residual)
                report.witnesses.append({"relation": name, "k": list(k),
                                         "residual": residual})
            else:
                residual = out.max_abs()
                report.max_residual = max(report.max_residual, residual)
                if residual > tolerance:
                    report.witnesses.append({"relation": name, "k": list(k),
                                             "residual": residual})
    return report


# -- suite orchestration -------------------------------------------------------

SUITES = ("all", "relations", "lemma-aux", "lemma-main", "kernel", "basis")


def run_suite(suite: str, p: Presentation, c: RepConfig | None, m_max: int = 5) -> list[CheckReport]:
    """Run one named suite (or all applicable ones) and return the reports."""
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    reports: list[CheckReport] = []
    wants = SUITES[1:] if suite == "all" else (suite,)
    for name in wants:
        if name == "relations":
            reports.append(check_symbolic_relations(p))
            if c is not None and p.kind == "Sigma":
                raw = presentation_Sigma(p.n, sphere_reduction=False)
                reports.append(check_relations_in_rep(c, raw))
            continue
        if p.kind != "Sigma" or c is None:
            if suite != "all":
                raise DomainError(f"suite {name!r} needs the Sigma algebra and "
                                  "representation parameters")
            continue
        if name == "lemma-aux":
            sphere_on = p if p.sphere_reduction else presentation_Sigma(p.n)
            reports.append(check_lemma_aux(sphere_on, m_max))
        elif name == "lemma-main":
            for k in range(1, c.n + 1):
                reports.append(check_lemma_main(c, k))
        elif name == "kernel":
            reports.append(check_kernel_structure(c))
        elif name == "basis":
            reports.append(check_lowest_weight_basis(c))
    return reports
