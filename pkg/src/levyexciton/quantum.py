"""Single-exciton quantum dynamics with local dephasing (d = 1).

State: the two-point correlation matrix G_{jm} = <S+_j S-_m>, which obeys
the closed linear equation

    dG/dt = i [h^T, G] - gamma (G - diag G),

with h the single-particle hopping matrix. Populations are the diagonal;
dephasing damps only coherences. Besides direct ODE propagation the module
carries the weak-dephasing spectral machinery: for each momentum q of the
translation-invariant ring the evolution block is C_q + gamma X with C_q an
anti-Hermitian circulant and X = diag(1 - delta_{m,0}); eigenvalues E give
decay modes e^{-E t}, perturbation theory in gamma gives the fast branch,
and exact diagonalization exposes the slow (non-perturbative) one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .model import ModelParams, min_image, sum_r2_hopping_sq

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
DIAG_NEGATIVITY_TOL = -1e-12
REAL_BRANCH_IM_TOL = 1e-9
EIG_RESIDUAL_TOL = 1e-8
DEGENERACY_GAP = 1e-8


class PropagationError(RuntimeError):
    """Invariant breach or integrator failure during G propagation."""


class DegenerateSpectrumError(RuntimeError):
    """Unperturbed levels too close for the perturbative corrections."""


class ConditioningError(RuntimeError):
    """Spectral propagation refused: eigenbasis too ill-conditioned."""


class SpectralError(RuntimeError):
    """Dense diagonalization failed for a momentum block."""


def build_h(params: ModelParams) -> np.ndarray:
    """Single-particle hopping matrix under the parameter set's bc.

    Periodic rings sum the two images, h(r) = J [r^-a + (N-r)^-a]; open
    chains use J / |i-j|^a. Symmetric with zero diagonal.
    """
    if params.d != 1:
        raise ValueError("quantum layer is one-dimensional")
    N = params.N
    idx = np.arange(N)
    if params.bc == "periodic":
        return _ring_h_row(params)[(idx[:, None] - idx[None, :]) % N]
    r = np.abs(idx[:, None] - idx[None, :]).astype(float)
    np.fill_diagonal(r, np.inf)
    return params.J / r**params.alpha


@dataclass
class CorrelationMatrix:
    """Two-point correlation state at one time.

    Hermitian, unit trace for a single exciton, real non-negative diagonal
    (the exciton density n_j = G_jj).
    """

    t: float
    G: np.ndarray
    bc: str

    def check(self):
        G = self.G
        herm = float(np.max(np.abs(G - G.conj().T)))
        if herm > HERMITICITY_TOL:
            raise PropagationError(f"hermiticity violated: {herm:.3e} at t = {self.t}")
        return self

    @property
    def density(self) -> np.ndarray:
        return self.G.diagonal().real

    def trace(self) -> float:
        return float(self.G.trace().real)


def initial_g_delta(params: ModelParams, site: int | None = None) -> CorrelationMatrix:
    """Exciton localized on one site (default: the chain center)."""
    N = params.N
    if site is None:
        site = N // 2
    G = np.zeros((N, N), dtype=complex)
    G[site, site] = 1.0
    return CorrelationMatrix(0.0, G, params.bc)


def _check_G(G: np.ndarray, trace0: float, t: float):
    herm = float(np.max(np.abs(G - G.conj().T)))
    if herm > HERMITICITY_TOL:
        raise PropagationError(f"hermiticity drift {herm:.3e} at t = {t}")
    tr = float(G.trace().real)
    if abs(tr - trace0) > TRACE_TOL * max(1.0, abs(trace0)):
        raise PropagationError(f"trace drift {tr - trace0:.3e} at t = {t}")
    dmin = float(G.diagonal().real.min())
    if dmin < DIAG_NEGATIVITY_TOL:
        raise PropagationError(f"negative population {dmin:.3e} at t = {t}")


def propagate_G(
    G0: CorrelationMatrix,
    params: ModelParams,
    t_grid,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> list[CorrelationMatrix]:
    """Adaptive integration of the dephasing equation of motion.

    Hermiticity, trace conservation, and population positivity are asserted
    at every output time; a breach raises :class:`PropagationError`.
    """
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    N = params.N
    h = build_h(params)
    hT = h.T.copy()
    gamma = params.gamma
    Gin = G0.G if isinstance(G0, CorrelationMatrix) else np.asarray(G0, dtype=complex)
    trace0 = float(Gin.trace().real)

    def rhs(t, y):
        G = y.view(complex).reshape(N, N)
        dG = 1j * (hT @ G - G @ hT) - gamma * (G - np.diag(np.diag(G)))
        return dG.ravel().view(float)

    sol = solve_ivp(
        rhs,
        (0.0, float(t_grid[-1])),
        Gin.astype(complex).ravel().view(float),
        t_eval=t_grid,
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise PropagationError(f"integrator failed: {sol.message}")
    out = []
    for k, t in enumerate(t_grid):
        G = sol.y[:, k].copy().view(complex).reshape(N, N)
        _check_G(G, trace0, float(t))
        out.append(CorrelationMatrix(float(t), G, params.bc))
    return out


def variance_of_density(cm: CorrelationMatrix, origin: int | None = None) -> float:
    """Variance of the exciton density in displacement coordinates."""
    n = cm.density
    N = n.size
    if origin is None:
        origin = N // 2 if cm.bc == "open" else 0
    x = np.arange(N) - origin
    if cm.bc == "periodic":
        x = min_image(x, N)
    x = x.astype(float)
    mean = float(n @ x)
    return float(n @ x**2) - mean**2


def variance_closed_form(params: ModelParams, t) -> np.ndarray:
    """Exact infinite-lattice variance law, evaluated with the finite kernel.

    2 sum_r r^2 H_r^2 / gamma^2 * (gamma t + e^{-gamma t} - 1): ballistic
    sum_r r^2 H_r^2 t^2 for gamma t << 1, diffusive slope 2 sum r^2 H_r^2 /
    gamma for gamma t >> 1. The displacement sum runs over the finite
    lattice; for alpha <= (d+2)/2 it diverges with N and results are reported
    normalized by it.
    """
    S = sum_r2_hopping_sq(params)
    gamma = params.gamma
    tt = np.asarray(t, dtype=float)
    out = 2.0 * S / gamma**2 * (gamma * tt + np.exp(-gamma * tt) - 1.0)
    return out if out.ndim else float(out)


# -- weak-dephasing spectral machinery -----------------------------------------


def _ring_h_row(params: ModelParams) -> np.ndarray:
    """h(r), r = 0..N-1, with the two-image ring convention."""
    N = params.N
    r = np.arange(1, N, dtype=float)
    row = np.zeros(N)
    row[1:] = params.J * (r**-params.alpha + (N - r) ** -params.alpha)
    return row


def _require_odd_ring(params: ModelParams):
    if params.bc != "periodic" or params.d != 1:
        raise ValueError("spectral machinery requires a one-dimensional ring")
    if params.N % 2 == 0:
        raise ValueError(
            "even rings have exact degeneracies in the unperturbed spectrum; use odd N"
        )


def momentum(params: ModelParams, q_index: int) -> float:
    return 2.0 * math.pi * q_index / params.N


def build_circulant(q_index: int, params: ModelParams) -> np.ndarray:
    """Anti-Hermitian circulant block C_q with entries i[1 - e^{iq(m-j)}] h_{m,j}."""
    _require_odd_ring(params)
    N = params.N
    q = momentum(params, q_index)
    m = np.arange(N)
    diff = m[:, None] - m[None, :]
    hmat = _ring_h_row(params)[diff % N]
    return 1j * (1.0 - np.exp(1j * q * diff)) * hmat


def unperturbed_spectrum(q_index: int, params: ModelParams) -> np.ndarray:
    """Eigenvalues of C_q: the DFT of its first row, purely imaginary.

    For odd N exactly one eigenvalue vanishes per momentum and the remainder
    come in conjugate pairs.
    """
    _require_odd_ring(params)
    N = params.N
    q = momentum(params, q_index)
    m = np.arange(N)
    row = 1j * (1.0 - np.exp(-1j * q * m)) * _ring_h_row(params)
    k = np.arange(N)
    phases = np.exp(1j * 2.0 * math.pi * np.outer(m, k) / N)
    return row @ phases


def perturbative_spectrum(q_index: int, params: ModelParams, order: int = 3) -> np.ndarray:
    """Dephasing-corrected eigenvalues through third order in gamma.

    E = E0 + gamma (N-1)/N - i gamma^2 d2 + gamma^3 d3, with the second- and
    third-order coefficients built from the unperturbed level differences
    (the dephasing projector has constant matrix elements in the plane-wave
    basis). Near-degenerate unperturbed levels are refused.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2, or 3")
    N = params.N
    gamma = params.gamma
    if q_index % N == 0:
        # C_0 vanishes identically, so gamma X is the exact block: one steady
        # mode plus an (N-1)-fold level at gamma (no series needed)
        out = np.full(N, gamma, dtype=complex)
        out[0] = 0.0
        return out
    E0 = unperturbed_spectrum(q_index, params)
    E = E0 + gamma * (N - 1) / N
    if order == 1:
        return E
    x = E0.imag  # E0 = i x, x real
    dx = x[:, None] - x[None, :]  # x_k - x_p
    off = ~np.eye(N, dtype=bool)
    if np.min(np.abs(dx[off])) < DEGENERACY_GAP:
        raise DegenerateSpectrumError(
            f"unperturbed gap below {DEGENERACY_GAP} at q index {q_index}"
        )
    with np.errstate(divide="ignore"):
        inv = np.where(off, 1.0 / np.where(off, dx, 1.0), 0.0)
    # delta2_k = (i/N^2) sum_{p != k} 1/(E0_p - E0_k) = (1/N^2) sum 1/(x_p - x_k)
    d2 = -inv.sum(axis=1) / N**2
    E = E - 1j * gamma**2 * d2
    if order == 2:
        return E
    s1 = inv.sum(axis=1)  # sum_p 1/(x_k - x_p)
    s2 = (inv**2).sum(axis=1)
    # sum_{p != k, s != k, p != s} 1/((E0_k-E0_p)(E0_k-E0_s)) with E0 = i x:
    # each factor 1/(i dx) contributes -i/dx, product = -(1/dx_p)(1/dx_s)
    d3 = -(s1**2 - s2) / N**3
    return E + gamma**3 * d3


def perturbed_eigenvectors(q_index: int, params: ModelParams) -> np.ndarray:
    """Plane waves with the first-order dephasing correction (columns)."""
    E0 = unperturbed_spectrum(q_index, params)
    N = params.N
    gamma = params.gamma
    m = np.arange(N)
    k = np.arange(N)
    A0 = np.exp(1j * 2.0 * math.pi * np.outer(m, k) / N) / math.sqrt(N)
    x = E0.imag
    dx = x[:, None] - x[None, :]
    off = ~np.eye(N, dtype=bool)
    if np.min(np.abs(dx[off])) < DEGENERACY_GAP:
        raise DegenerateSpectrumError(f"near-degenerate block at q index {q_index}")
    # coeff[p, k] = 1/(E0_k - E0_p), zero on the diagonal
    denom = 1j * np.where(off, -dx, 1.0)
    coeff = np.where(off, 1.0 / denom, 0.0)
    return A0 - (gamma / N) * (A0 @ coeff)


@dataclass
class SpectralSet:
    """Eigen-data of one momentum block C_q + gamma X."""

    q_index: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    branch: np.ndarray  # "real" / "complex" per eigenvalue
    residual: float
    condition: float


def solve_dephasing_block(q_index: int, params: ModelParams) -> SpectralSet:
    """Dense non-Hermitian diagonalization of one momentum block.

    Delegates to LAPACK's Hessenberg-plus-shifted-QR driver; the eigenpair
    residual and the eigenbasis condition number are always reported.
    """
    M = build_circulant(q_index, params) + params.gamma * np.diag(
        (np.arange(params.N) != 0).astype(float)
    )
    try:
        E, V = np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigensolver failed at q index {q_index}: {exc}") from exc
    res = float(np.max(np.abs(M @ V - V * E)) / max(1.0, float(np.max(np.abs(V)))))
    if res > EIG_RESIDUAL_TOL:
        raise SpectralError(f"eigen-residual {res:.3e} at q index {q_index}")
    branch = np.where(np.abs(E.imag) <= REAL_BRANCH_IM_TOL, "real", "complex")
    cond = float(np.linalg.cond(V))
    return SpectralSet(q_index, E, V, branch, res, cond)


def solve_dephasing_spectrum(params: ModelParams) -> list[SpectralSet]:
    """All N momentum blocks (deterministic q order)."""
    _require_odd_ring(params)
    return [solve_dephasing_block(qi, params) for qi in range(params.N)]


@dataclass
class SlowModeSummary:
    """Slow-branch data for one system size."""

    N: int
    real_gap: float
    complex_gap: float
    n_real: int
    sets: list


def slow_modes(params: ModelParams, keep_sets: bool = False) -> SlowModeSummary:
    """Classify the dephasing spectrum into fast complex and slow real branches.

    real_gap: smallest nonzero real part among real-classified eigenvalues
    (the slow branch); complex_gap: smallest real part of the complex branch,
    which perturbation theory places at gamma (N-1)/N.
    """
    sets = solve_dephasing_spectrum(params)
    reals, comps = [], []
    for s in sets:
        re = s.eigenvalues.real
        mask = s.branch == "real"
        nz = re > 1e-12 * params.gamma
        reals.extend(re[mask & nz])
        comps.extend(re[~mask])
    return SlowModeSummary(
        N=params.N,
        real_gap=float(np.min(reals)),
        complex_gap=float(np.min(comps)),
        n_real=len(reals),
        sets=sets if keep_sets else [],
    )


def slow_mode_scaling(params: ModelParams, sizes) -> dict:
    """Slow-branch gap vs system size with a log-log power-law fit."""
    gaps, cgaps = [], []
    for N in sizes:
        p = ModelParams(d=1, alpha=params.alpha, J=params.J, gamma=params.gamma, N=int(N), bc="periodic")
        s = slow_modes(p)
        gaps.append(s.real_gap)
        cgaps.append(s.complex_gap)
    slope, intercept = np.polyfit(np.log(sizes), np.log(gaps), 1)
    return {
        "sizes": list(sizes),
        "real_gaps": gaps,
        "complex_gaps": cgaps,
        "exponent": float(slope),
        "prefactor": float(np.exp(intercept)),
    }


def spectral_propagate_G(G0: CorrelationMatrix, params: ModelParams, t, cond_limit: float = 1e8):
    """Evolve G through the per-momentum eigendecompositions.

    G(0) is expanded on the eigenmatrices A^{q,k}_{j,m} = e^{iqj} a^{q,k}_{m-j}
    by the biorthogonal (left-eigenvector) pairing: Fourier transform the
    shifted diagonals of G(0) over the center coordinate, solve V c = g per
    momentum block, damp each coefficient by e^{-E t}, and transform back.
    Agrees with :func:`propagate_G`; an ill-conditioned eigenbasis raises
    :class:`ConditioningError` with the offending block.
    """
    _require_odd_ring(params)
    N = params.N
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    Gin = G0.G if isinstance(G0, CorrelationMatrix) else np.asarray(G0, dtype=complex)
    # shifted-diagonal representation: S[j, mu] = G_{j, (j+mu) mod N};
    # the block label q enters as G ~ e^{+iqj}, so analysis is fft/N
    j = np.arange(N)
    S = Gin[j[:, None], (j[:, None] + j[None, :]) % N]
    ghat = np.fft.fft(S, axis=0) / N  # ghat[q, mu]
    sets = solve_dephasing_spectrum(params)
    coeffs = []
    for s in sets:
        if s.condition > cond_limit:
            raise ConditioningError(
                f"eigenbasis condition {s.condition:.2e} at q index {s.q_index} "
                f"exceeds {cond_limit:.1e}; fall back to propagate_G"
            )
        coeffs.append(np.linalg.solve(s.eigenvectors, ghat[s.q_index]))
    out = []
    for tv in ts:
        Snew = np.empty_like(S)
        for s, c in zip(sets, coeffs):
            Snew[s.q_index] = s.eigenvectors @ (c * np.exp(-s.eigenvalues * tv))
        # back to site representation: G_{j, j+mu} = sum_q e^{iqj} Snew[q, mu]
        Sj = np.fft.ifft(Snew, axis=0) * N
        G = np.empty((N, N), dtype=complex)
        G[j[:, None], (j[:, None] + j[None, :]) % N] = Sj
        out.append(CorrelationMatrix(float(tv), G, params.bc))
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return out[0]
    return out


def spectra_to_csv(sets: list[SpectralSet], path):
    """CSV export with columns q_index, k_index, re_E, im_E, branch."""
    with open(path, "w") as fh:
        fh.write("q_index,k_index,re_E,im_E,branch\n")
        for s in sets:
            for k in range(s.eigenvalues.size):
                E = s.eigenvalues[k]
                fh.write(f"{s.q_index},{k},%.16e,%.16e,{s.branch[k]}\n" % (E.real, E.imag))
