"""Discrete space-time norm laboratory.

Fields live on a lattice of spatial frequencies ``k in Z/lambda`` truncated to
``|k| <= k_max`` and a uniform temporal-frequency grid of step ``dtau`` on
``[-tau_max, tau_max]``. Integration weights follow the normalized counting
measure: ``1/lambda`` per k-cell and ``dtau`` per tau-cell, so the lattice
norms discretize

    ||u||_{X^{s,b}} = || <k>^s <tau - 4 pi^2 k^3>^b u~(k,tau) ||_{L2}.

The trilinear operator carries the spatial-derivative factor ``i k`` of its
continuum definition; its nonresonant sum enters with the ``1/lambda^2 dtau^2``
convolution weights while the diagonal resonant correction carries only the
temporal ``dtau^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.fft import next_fast_len
from scipy.signal import fftconvolve

from .errors import ConfigurationError, DimensionError, InvariantError

FOUR_PI_SQ = 4.0 * np.pi ** 2


def default_tau_max(k_max: float) -> float:
    """Window wide enough that every retained characteristic point fits."""
    return FOUR_PI_SQ * k_max ** 3 + 8.0


@dataclass(frozen=True)
class SpaceTimeLattice:
    lam: float
    k_max: float
    dtau: float
    tau_max: float

    def __post_init__(self):
        if self.lam < 1:
            raise ConfigurationError("lambda must be >= 1")
        if self.dtau <= 0 or self.tau_max <= 0 or self.k_max <= 0:
            raise ConfigurationError("k_max, dtau and tau_max must be positive")
        if abs(self.k_max * self.lam - round(self.k_max * self.lam)) > 1e-9:
            raise ConfigurationError("k_max must be a multiple of 1/lambda")

    @classmethod
    def make(cls, lam: float, k_max: float, dtau: float,
             tau_max: float | None = None) -> "SpaceTimeLattice":
        return cls(lam, k_max, dtau, tau_max if tau_max is not None
                   else default_tau_max(k_max))

    @property
    def k_half(self) -> int:
        return int(round(self.k_max * self.lam))

    @property
    def tau_half(self) -> int:
        return int(round(self.tau_max / self.dtau))

    @property
    def shape(self) -> tuple[int, int]:
        return (2 * self.k_half + 1, 2 * self.tau_half + 1)

    @property
    def ks(self) -> np.ndarray:
        """Frequencies in increasing order, -k_max ... k_max."""
        return np.arange(-self.k_half, self.k_half + 1) / self.lam

    @property
    def taus(self) -> np.ndarray:
        return np.arange(-self.tau_half, self.tau_half + 1) * self.dtau

    def sigma(self) -> np.ndarray:
        """Distance to the characteristic, tau - 4 pi^2 k^3, shape (nk, nt)."""
        return self.taus[None, :] - FOUR_PI_SQ * self.ks[:, None] ** 3


@dataclass(frozen=True)
class SpaceTimeField:
    lattice: SpaceTimeLattice
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != self.lattice.shape:
            raise DimensionError(
                f"coefficients shape {c.shape} does not match lattice {self.lattice.shape}"
            )
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, lattice: SpaceTimeLattice) -> "SpaceTimeField":
        return cls(lattice, np.zeros(lattice.shape, dtype=np.complex128))


@dataclass(frozen=True)
class XsbNormSpec:
    s: float
    b: float = 0.5
    homogeneous: bool = False
    flavor: str = "xsb"   # xsb | ys | zs


def _bracket(x: np.ndarray) -> np.ndarray:
    return 1.0 + np.abs(x)


def _k_weights(lattice: SpaceTimeLattice, s: float, homogeneous: bool) -> np.ndarray:
    ks = lattice.ks
    if homogeneous:
        w = np.zeros_like(ks)
        nz = np.abs(ks) > 0
        w[nz] = np.abs(ks[nz]) ** s
        return w
    return _bracket(ks) ** s


def xsb_norm(field: SpaceTimeField, spec: XsbNormSpec) -> float:
    """Discrete quadrature of the space-time norm defined by ``spec``."""
    lat = field.lattice
    if spec.homogeneous and np.any(np.abs(field.coeffs[lat.k_half, :]) > 0):
        raise InvariantError("homogeneous norm requires no mass at k=0")
    wk = _k_weights(lat, spec.s, spec.homogeneous)
    sig = _bracket(lat.sigma())
    dmeas = lat.dtau / lat.lam
    if spec.flavor == "xsb":
        return float(np.sqrt(dmeas * np.sum(
            (wk[:, None] * sig ** spec.b * np.abs(field.coeffs)) ** 2)))
    if spec.flavor == "ys":
        main = xsb_norm(field, replace(spec, flavor="xsb", b=0.5))
        l1 = lat.dtau * np.sum(np.abs(field.coeffs), axis=1)
        return main + float(np.sqrt(np.sum((wk * l1) ** 2) / lat.lam))
    if spec.flavor == "zs":
        main = xsb_norm(field, replace(spec, flavor="xsb", b=-0.5))
        l1 = lat.dtau * np.sum(np.abs(field.coeffs) / sig, axis=1)
        return main + float(np.sqrt(np.sum((wk * l1) ** 2) / lat.lam))
    raise ConfigurationError(f"unknown norm flavor {spec.flavor!r}")


def _enlarged(lat: SpaceTimeLattice) -> SpaceTimeLattice:
    # exact index tripling so convolution output shapes match
    return SpaceTimeLattice(lat.lam, 3 * lat.k_half / lat.lam, lat.dtau,
                            3 * lat.tau_half * lat.dtau)


def _rowwise_conv3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return fftconvolve(fftconvolve(a, b, axes=1), c, axes=1)


def _embed_rows(block: np.ndarray, out_shape: tuple[int, int]) -> np.ndarray:
    out = np.zeros(out_shape, dtype=np.complex128)
    row0 = (out_shape[0] - block.shape[0]) // 2
    out[row0:row0 + block.shape[0], :] = block
    return out


def spacetime_j(u: SpaceTimeField, v: SpaceTimeField, w: SpaceTimeField) -> SpaceTimeField:
    """Trilinear operator on the (k, tau) lattice, resonant planes removed.

    Output lives on the enlarged lattice (3x in both k and tau extent).
    The definition mirrored by the brute-force oracle:

        J(k,tau) = (i k / 3) (dtau^2 / lam^2) * [nonresonant triple sum]
                   - i k dtau^2 * sum_{tau1+tau2+tau3=tau} u(k,.) v(k,.) w(-k,.)

    where the nonresonant sum runs over ``k1+k2+k3 = k`` with
    ``(k1+k2)(k2+k3)(k3+k1) != 0`` and ``tau1+tau2+tau3 = tau``.
    """
    if u.lattice != v.lattice or u.lattice != w.lattice:
        raise DimensionError("lattice mismatch between trilinear inputs")
    lat = u.lattice
    out_lat = _enlarged(lat)
    cu, cv, cw = u.coeffs, v.coeffs, w.coeffs

    full = fftconvolve(fftconvolve(cu, cv), cw)

    flip_k = slice(None, None, -1)
    pair_uv = fftconvolve(cu, cv[flip_k, :], axes=1).sum(axis=0)  # k1 + k2 = 0
    pair_vw = fftconvolve(cv, cw[flip_k, :], axes=1).sum(axis=0)  # k2 + k3 = 0
    pair_uw = fftconvolve(cu, cw[flip_k, :], axes=1).sum(axis=0)  # k3 + k1 = 0

    plane_a = fftconvolve(cw, pair_uv[None, :], axes=1)
    plane_b = fftconvolve(cu, pair_vw[None, :], axes=1)
    plane_c = fftconvolve(cv, pair_uw[None, :], axes=1)

    line_ab = _rowwise_conv3(cu, cv[flip_k, :], cw)
    line_ac = _rowwise_conv3(cu[flip_k, :], cv, cw)
    line_bc = _rowwise_conv3(cu, cv, cw[flip_k, :])

    nonres = full.copy()
    for block in (plane_a, plane_b, plane_c):
        nonres -= _embed_rows(block, full.shape)
    for block in (line_ab, line_ac, line_bc):
        nonres += _embed_rows(block, full.shape)

    k_out = out_lat.ks
    weights_nonres = (1j * k_out / 3.0) * (lat.dtau ** 2 / lat.lam ** 2)
    coeffs = weights_nonres[:, None] * nonres
    coeffs -= (1j * k_out[:, None] * lat.dtau ** 2) * _embed_rows(line_bc, full.shape)
    return SpaceTimeField(out_lat, coeffs)


def restrict_k(field: SpaceTimeField, k_max: float) -> SpaceTimeField:
    """Drop rows with ``|k| > k_max`` (same tau grid)."""
    lat = field.lattice
    if k_max > lat.k_max:
        raise ConfigurationError("cannot restrict to a larger k_max")
    new_lat = SpaceTimeLattice(lat.lam, k_max, lat.dtau, lat.tau_max)
    half = new_lat.k_half
    rows = slice(lat.k_half - half, lat.k_half + half + 1)
    return SpaceTimeField(new_lat, field.coeffs[rows, :])


def refine_tau(field: SpaceTimeField, factor: int = 2) -> SpaceTimeField:
    """Piecewise-constant refinement of the tau grid (cell integrals preserved)."""
    lat = field.lattice
    new_lat = SpaceTimeLattice(lat.lam, lat.k_max, lat.dtau / factor, lat.tau_max)
    nk, nt_new = new_lat.shape
    out = np.zeros((nk, nt_new), dtype=np.complex128)
    centers = factor * np.arange(lat.shape[1])  # coarse cell i -> fine index f*i
    for off in range(-(factor // 2), factor - factor // 2):
        idx = np.clip(centers + off, 0, nt_new - 1)
        out[:, idx] = field.coeffs
    return SpaceTimeField(new_lat, out)


def band_split_mask(lattice: SpaceTimeLattice, cutoff: float) -> tuple[np.ndarray, np.ndarray]:
    low = np.abs(lattice.ks) < cutoff
    return low, ~low


def apply_k_mask(field: SpaceTimeField, mask: np.ndarray) -> SpaceTimeField:
    return SpaceTimeField(field.lattice, field.coeffs * mask[:, None])


def physical_l4(field: SpaceTimeField) -> float:
    """L4 norm of the reconstructed function over one space and time period.

    The tau lattice of step dtau corresponds to a ``1/dtau``-periodic time
    variable; the fourth power of the band-limited reconstruction is
    integrated exactly on a sufficiently fine fft grid.
    """
    lat = field.lattice
    nk, nt = lat.shape
    n_x = next_fast_len(4 * nk + 2)
    n_t = next_fast_len(4 * nt + 2)
    spread = np.zeros((n_x, n_t), dtype=np.complex128)
    j = np.arange(-lat.k_half, lat.k_half + 1) % n_x
    i = np.arange(-lat.tau_half, lat.tau_half + 1) % n_t
    spread[np.ix_(j, i)] = field.coeffs
    u = np.fft.ifft2(spread) * (n_x * n_t) * (lat.dtau / lat.lam)
    x_period = lat.lam
    t_period = 1.0 / lat.dtau
    cell = (x_period / n_x) * (t_period / n_t)
    return float((np.sum(np.abs(u) ** 4) * cell) ** 0.25)


def strichartz_ratio(field: SpaceTimeField, b: float) -> float:
    """``||u||_L4 / ||u||_{X^{0,b}}`` (the Strichartz quotient), b > 1/3."""
    if b <= 1.0 / 3.0:
        raise ConfigurationError("Strichartz ratio requires b > 1/3")
    denom = xsb_norm(field, XsbNormSpec(s=0.0, b=b))
    if denom == 0.0:
        raise InvariantError("zero denominator in Strichartz ratio")
    return physical_l4(field) / denom


def product_minus_resonance(u: SpaceTimeField, v: SpaceTimeField,
                            w: SpaceTimeField) -> SpaceTimeField:
    """``(u v - sum_l u(l) v(-l)) w`` as a weighted lattice convolution."""
    if u.lattice != v.lattice or u.lattice != w.lattice:
        raise DimensionError("lattice mismatch")
    lat = u.lattice
    out_lat = _enlarged(lat)
    cu, cv, cw = u.coeffs, v.coeffs, w.coeffs
    full = fftconvolve(fftconvolve(cu, cv), cw)
    pair_uv = fftconvolve(cu, cv[::-1, :], axes=1).sum(axis=0)
    plane_a = fftconvolve(cw, pair_uv[None, :], axes=1)
    out = full - _embed_rows(plane_a, full.shape)
    return SpaceTimeField(out_lat, out * (lat.dtau ** 2 / lat.lam ** 2))


TRILINEAR_EPS = 0.01

_CASE_FILTERS = {
    "low_low_high": ("low", "low", "high"),
    "low_high_high": ("low", "high", "high"),
    "high_high_high": ("high", "high", "high"),
}


def trilinear_ratio(
    u: SpaceTimeField,
    v: SpaceTimeField,
    w: SpaceTimeField,
    s: float,
    preset: str = "main",
    band_cutoff: float | None = None,
) -> float:
    """Quotient probing the trilinear bound for the chosen case preset.

    ``main`` measures ``||J[u,v,w]||_{X^{s,-1/2}} / prod ||.||_{X^{s,1/2}}``.
    The band presets filter the inputs at ``band_cutoff`` and use the mixed
    norms of the corresponding low/high frequency estimate with a fixed small
    epsilon.
    """
    eps = TRILINEAR_EPS
    if preset == "main":
        num = xsb_norm(spacetime_j(u, v, w), XsbNormSpec(s=s, b=-0.5))
        den = (xsb_norm(u, XsbNormSpec(s=s, b=0.5))
               * xsb_norm(v, XsbNormSpec(s=s, b=0.5))
               * xsb_norm(w, XsbNormSpec(s=s, b=0.5)))
    elif preset in _CASE_FILTERS:
        if band_cutoff is None:
            raise ConfigurationError("band presets require band_cutoff")
        low, high = band_split_mask(u.lattice, band_cutoff)
        masks = [low if which == "low" else high for which in _CASE_FILTERS[preset]]
        fu, fv, fw = (apply_k_mask(f, m) for f, m in zip((u, v, w), masks))
        prod = product_minus_resonance(fu, fv, fw)
        if preset == "low_low_high":
            num = xsb_norm(prod, XsbNormSpec(s=1 - 2 * eps, b=-0.5 + eps))
            den = min(
                xsb_norm(fu, XsbNormSpec(0.5 + eps, 0.5 - eps)) * xsb_norm(fv, XsbNormSpec(0.0, 0.5 - eps)),
                xsb_norm(fv, XsbNormSpec(0.5 + eps, 0.5 - eps)) * xsb_norm(fu, XsbNormSpec(0.0, 0.5 - eps)),
            ) * xsb_norm(fw, XsbNormSpec(0.0, 0.5 - eps / 2))
        elif preset == "low_high_high":
            num = xsb_norm(prod, XsbNormSpec(s=1 - 2 * eps, b=-0.5 + eps))
            den = min(
                xsb_norm(fu, XsbNormSpec(0.5 + eps, 0.5 - eps)) * xsb_norm(fv, XsbNormSpec(0.0, 0.5 - eps)),
                xsb_norm(fv, XsbNormSpec(0.5 + eps, 0.5 - eps)) * xsb_norm(fu, XsbNormSpec(0.0, 0.5 - eps)),
            ) * xsb_norm(fw, XsbNormSpec(0.0, 0.5 - eps / 2))
        else:
            num = xsb_norm(prod, XsbNormSpec(s=-2 * eps, b=-0.5 + eps))
            den = (xsb_norm(fu, XsbNormSpec(0.0, 7.0 / 18.0 + eps))
                   * xsb_norm(fv, XsbNormSpec(0.0, 7.0 / 18.0 + eps))
                   * xsb_norm(fw, XsbNormSpec(0.0, 7.0 / 18.0 + eps)))
    else:
        raise ConfigurationError(f"unknown trilinear preset {preset!r}")
    if num == 0.0:
        return 0.0
    if den == 0.0:
        raise InvariantError("zero denominator in trilinear ratio")
    return num / den


def time_field_from_samples(lattice: SpaceTimeLattice, samples: np.ndarray) -> np.ndarray:
    """Map time samples over one period onto the centered tau lattice.

    ``samples[b]`` is ``f(b * P / nt)`` with ``P = 1/dtau``; returns ``f_hat``
    over ``lattice.taus`` such that ``f(t) = sum_i dtau f_hat(tau_i) e^{2 pi i tau_i t}``.
    """
    nt = lattice.shape[1]
    if samples.size != nt:
        raise DimensionError("need one sample per tau cell")
    spec = np.fft.fft(samples) / (nt * lattice.dtau)
    centered = np.zeros(nt, dtype=np.complex128)
    idx = np.arange(-lattice.tau_half, lattice.tau_half + 1)
    centered[:] = spec[idx % nt]
    return centered


def eta_window(t: np.ndarray) -> np.ndarray:
    """Smooth compactly supported cutoff: 1 on |t|<=1, 0 on |t|>=2."""
    a = np.abs(np.asarray(t, dtype=float))
    out = np.zeros_like(a)
    out[a <= 1.0] = 1.0
    mid = (a > 1.0) & (a < 2.0)

    def phi(x):
        with np.errstate(over="ignore"):
            return np.where(x > 0, np.exp(-1.0 / np.maximum(x, 1e-300)), 0.0)

    p = phi(2.0 - a[mid])
    q = phi(a[mid] - 1.0)
    out[mid] = p / (p + q)
    return out


def multiply_time_field(f_hat: np.ndarray, g: SpaceTimeField) -> SpaceTimeField:
    """Coefficients of ``f(t) g(x,t)`` on the tau-enlarged lattice."""
    lat = g.lattice
    if f_hat.size != lat.shape[1]:
        raise DimensionError("time field must share the tau lattice")
    out_lat = SpaceTimeLattice(lat.lam, lat.k_max, lat.dtau,
                               2 * lat.tau_half * lat.dtau)
    conv = fftconvolve(g.coeffs, f_hat[None, :], axes=1) * lat.dtau
    return SpaceTimeField(out_lat, conv)


def leibniz_ratio(f_hat: np.ndarray, g: SpaceTimeField, s: float, b: float) -> float:
    """Quotient for the time-multiplier Leibniz bound.

    Denominator: ``||f_hat||_L1 ||g||_{X^{s,b}} + ||f||_{H^b_t} || <k>^s g ||_{L2_k L1_tau}``.
    """
    lat = g.lattice
    fg = multiply_time_field(f_hat, g)
    num = xsb_norm(fg, XsbNormSpec(s=s, b=b))
    f_l1 = float(lat.dtau * np.sum(np.abs(f_hat)))
    f_hb = float(np.sqrt(lat.dtau * np.sum((_bracket(lat.taus) ** b * np.abs(f_hat)) ** 2)))
    wk = _k_weights(lat, s, homogeneous=False)
    g_mixed = float(np.sqrt(np.sum(
        (wk * lat.dtau * np.sum(np.abs(g.coeffs), axis=1)) ** 2) / lat.lam))
    g_xsb = xsb_norm(g, XsbNormSpec(s=s, b=b))
    den = f_l1 * g_xsb + f_hb * g_mixed
    if num == 0.0:
        return 0.0
    if den == 0.0:
        raise InvariantError("zero denominator in Leibniz ratio")
    return num / den


# ---------------------------------------------------------------------------
# random ensembles


def random_field(lattice: SpaceTimeLattice, s: float, rng: np.random.Generator,
                 normalize: bool = True) -> SpaceTimeField:
    """Gaussian field with magnitudes ``<k>^{-s-1} <sigma>^{-1}``, unit X^{s,1/2}.

    The k=0 row is zeroed so resonance bookkeeping applies; a short moving
    average in tau keeps the sample smooth at the cell scale so ratios are
    stable under lattice refinement.
    """
    lat = lattice
    nk, nt = lat.shape
    mag = (_bracket(lat.ks)[:, None] ** (-s - 1.0)) / _bracket(lat.sigma())
    z = rng.standard_normal((nk, nt)) + 1j * rng.standard_normal((nk, nt))
    z[:, 1:-1] = 0.25 * z[:, :-2] + 0.5 * z[:, 1:-1] + 0.25 * z[:, 2:]
    coeffs = mag * z
    coeffs[lat.k_half, :] = 0.0
    field = SpaceTimeField(lat, coeffs)
    if normalize:
        scale = xsb_norm(field, XsbNormSpec(s=s, b=0.5))
        field = SpaceTimeField(lat, coeffs / scale)
    return field


def characteristic_field(lattice: SpaceTimeLattice, rng: np.random.Generator,
                         width: float = 1.0) -> SpaceTimeField:
    """Free-solution analog: mass within ``|sigma| <= width`` of the characteristic."""
    lat = lattice
    mask = (np.abs(lat.sigma()) <= width).astype(float)
    z = rng.standard_normal(lat.shape) + 1j * rng.standard_normal(lat.shape)
    coeffs = mask * z
    coeffs[lat.k_half, :] = 0.0
    field = SpaceTimeField(lat, coeffs)
    scale = xsb_norm(field, XsbNormSpec(s=0.0, b=0.5))
    if scale == 0.0:
        raise InvariantError("empty characteristic band")
    return SpaceTimeField(lat, coeffs / scale)


# ---------------------------------------------------------------------------
# appendix counterexample

ADMISSIBLE_COUNTEREXAMPLE_LAMBDAS = (4.0, 16.0, 64.0, 256.0)


@dataclass(frozen=True)
class CounterexamplePoint:
    lam: float
    resonance_product: float        # M = 3 (k1+k2)(k2+k3)(k3+k1)
    ratio_homogeneous: float
    ratio_inhomogeneous: float


@dataclass(frozen=True)
class CounterexampleReport:
    s: float
    dtau: float
    points: tuple
    slope_homogeneous: float
    slope_inhomogeneous: float


def _window_cells(center: float, dtau: float) -> np.ndarray:
    """Absolute tau-lattice indices i with |i*dtau - center| <= 1."""
    lo = int(np.ceil((center - 1.0) / dtau - 1e-12))
    hi = int(np.floor((center + 1.0) / dtau + 1e-12))
    return np.arange(lo, hi + 1)


def _sigma_weighted_norm(k: float, cells: np.ndarray, values: np.ndarray,
                         lam: float, s: float, dtau: float, center: float,
                         homogeneous: bool) -> float:
    sig = _bracket(cells * dtau - center)
    wk = abs(k) ** s if homogeneous else (1.0 + abs(k)) ** s
    return float(wk * np.sqrt(dtau / lam * np.sum(sig * np.abs(values) ** 2)))


def counterexample_point(lam: float, s: float, dtau: float = 0.25) -> CounterexamplePoint:
    """One-frequency-triple evaluation of the homogeneous-norm failure example.

    The three inputs sit at ``k = 1/lam, -2/lam, sqrt(lam)`` with unit windows
    around their characteristics; the operator output is supported at the sum
    frequency with the temporal profile given by the triple window convolution.
    """
    root = np.sqrt(lam)
    if abs(root * lam - round(root * lam)) > 1e-9:
        raise ConfigurationError(
            f"lambda={lam} not admissible: sqrt(lambda) is not on the lattice Z/lambda")
    k1, k2, k3 = 1.0 / lam, -2.0 / lam, root
    k_out = k1 + k2 + k3
    m_res = 3.0 * (k1 + k2) * (k2 + k3) * (k3 + k1)

    centers = [FOUR_PI_SQ * k ** 3 for k in (k1, k2, k3)]
    cells = [_window_cells(c, dtau) for c in centers]
    profiles = [np.ones(c.size) for c in cells]

    out_cells = cells[0][0] + cells[1][0] + cells[2][0] + np.arange(
        cells[0].size + cells[1].size + cells[2].size - 2)
    out_profile = np.convolve(np.convolve(profiles[0], profiles[1]), profiles[2])
    j_values = (1j * k_out / 3.0) * (dtau ** 2 / lam ** 2) * out_profile
    out_center = FOUR_PI_SQ * k_out ** 3

    def ratio(homogeneous: bool) -> float:
        norms = [
            _sigma_weighted_norm(k, c, p, lam, s, dtau, ctr, homogeneous)
            for k, c, p, ctr in zip((k1, k2, k3), cells, profiles, centers)
        ]
        j_norm = _sigma_weighted_norm(k_out, out_cells, j_values, lam, s, dtau,
                                      out_center, homogeneous)
        return j_norm / (norms[0] * norms[1] * norms[2])

    return CounterexamplePoint(
        lam=lam,
        resonance_product=m_res,
        ratio_homogeneous=ratio(True),
        ratio_inhomogeneous=ratio(False),
    )


def appendix_counterexample(lams, s: float, dtau: float = 0.25) -> CounterexampleReport:
    points = tuple(counterexample_point(lam, s, dtau) for lam in lams)
    lx = np.log([p.lam for p in points])
    slope_h = float(np.polyfit(lx, np.log([p.ratio_homogeneous for p in points]), 1)[0])
    slope_i = float(np.polyfit(lx, np.log([p.ratio_inhomogeneous for p in points]), 1)[0])
    return CounterexampleReport(
        s=s, dtau=dtau, points=points,
        slope_homogeneous=slope_h, slope_inhomogeneous=slope_i,
    )
