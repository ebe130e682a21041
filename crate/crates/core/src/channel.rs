//! Channel realizations and the scalar constants every boundary method consumes.
//!
//! A realization holds the four channel vectors `h_ij` (link TX_i -> RX_j,
//! conjugated) and the receiver noise variances. All boundary methods depend
//! on a realization only through [`ChannelConstants`]: the norms `g_ij`, the
//! cosines `kappa_i` of the Hermitian angle between `h_ii` and `h_ij`, and
//! the projections derived from them.

use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::vector::{inner, norm, CVector};

/// Lower margin on kappa below which two channels count as orthogonal.
pub const ORTHOGONAL_MARGIN: f64 = 1e-9;
/// Upper margin: kappa above `1 - COLINEAR_MARGIN` counts as colinear.
pub const COLINEAR_MARGIN: f64 = 1e-9;

const RAYLEIGH_MAX_REDRAWS: usize = 100;

/// Complex channel vectors and noise variances of one two-user MISO IC.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h11: CVector,
    pub h12: CVector,
    pub h21: CVector,
    pub h22: CVector,
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
}

impl ChannelRealization {
    pub fn new(
        h11: CVector,
        h12: CVector,
        h21: CVector,
        h22: CVector,
        sigma1_sq: f64,
        sigma2_sq: f64,
    ) -> Result<Self> {
        let n = h11.len();
        if n < 2 {
            return Err(domain(format!("n_T must be at least 2, got {n}")));
        }
        for h in [&h12, &h21, &h22] {
            if h.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: h.len() });
            }
        }
        if !(sigma1_sq > 0.0 && sigma2_sq > 0.0) {
            return Err(domain("noise variances must be positive"));
        }
        Ok(Self { h11, h12, h21, h22, sigma1_sq, sigma2_sq })
    }

    pub fn n_t(&self) -> usize {
        self.h11.len()
    }

    /// Direct channel `h_ii` of link `i` (1 or 2).
    pub fn direct(&self, i: usize) -> &[Complex64] {
        if i == 1 {
            &self.h11
        } else {
            &self.h22
        }
    }

    /// Crosstalk channel `h_ij`, j != i, leaving TX_i.
    pub fn crosstalk(&self, i: usize) -> &[Complex64] {
        if i == 1 {
            &self.h12
        } else {
            &self.h21
        }
    }

    /// Channel `h_ji` arriving at RX_i from the other transmitter.
    pub fn incoming_crosstalk(&self, i: usize) -> &[Complex64] {
        self.crosstalk(other(i))
    }

    pub fn sigma_sq(&self, i: usize) -> f64 {
        if i == 1 {
            self.sigma1_sq
        } else {
            self.sigma2_sq
        }
    }

    /// Multiplies every channel vector by its own unit-modulus phase.
    pub fn with_phases(&self, phases: [f64; 4]) -> Self {
        let rot = |h: &CVector, t: f64| -> CVector {
            let p = Complex64::from_polar(1.0, t);
            h.iter().map(|a| a * p).collect()
        };
        Self {
            h11: rot(&self.h11, phases[0]),
            h12: rot(&self.h12, phases[1]),
            h21: rot(&self.h21, phases[2]),
            h22: rot(&self.h22, phases[3]),
            ..self.clone()
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ChannelFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ChannelFile::from(self))?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }
}

pub(crate) fn other(i: usize) -> usize {
    if i == 1 {
        2
    } else {
        1
    }
}

/// On-disk channel file: vectors as arrays of `[re, im]` pairs.
#[derive(Debug, Serialize, Deserialize)]
struct ChannelFile {
    n_t: usize,
    h11: Vec<[f64; 2]>,
    h12: Vec<[f64; 2]>,
    h21: Vec<[f64; 2]>,
    h22: Vec<[f64; 2]>,
    sigma1_sq: f64,
    sigma2_sq: f64,
}

impl From<&ChannelRealization> for ChannelFile {
    fn from(ch: &ChannelRealization) -> Self {
        let pairs = |h: &CVector| h.iter().map(|c| [c.re, c.im]).collect();
        Self {
            n_t: ch.n_t(),
            h11: pairs(&ch.h11),
            h12: pairs(&ch.h12),
            h21: pairs(&ch.h21),
            h22: pairs(&ch.h22),
            sigma1_sq: ch.sigma1_sq,
            sigma2_sq: ch.sigma2_sq,
        }
    }
}

impl TryFrom<ChannelFile> for ChannelRealization {
    type Error = Error;

    fn try_from(f: ChannelFile) -> Result<Self> {
        let vec = |h: Vec<[f64; 2]>| -> CVector {
            h.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()
        };
        if f.h11.len() != f.n_t {
            return Err(Error::DimensionMismatch { expected: f.n_t, got: f.h11.len() });
        }
        ChannelRealization::new(
            vec(f.h11),
            vec(f.h12),
            vec(f.h21),
            vec(f.h22),
            f.sigma1_sq,
            f.sigma2_sq,
        )
    }
}

/// Scalar sufficient statistics of a channel realization.
///
/// Index conventions: `alpha_i`, `alpha_i_tilde` split the direct channel
/// `h_ii` into its components along and orthogonal to the crosstalk channel
/// `h_ij`; `beta_i`, `beta_i_tilde` split `h_ij` along and orthogonal to `h_ii`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelConstants {
    pub g11: f64,
    pub g12: f64,
    pub g21: f64,
    pub g22: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha1_tilde: f64,
    pub alpha2_tilde: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta1_tilde: f64,
    pub beta2_tilde: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
}

/// The independent fields of a constants file; derived fields are recomputed.
#[derive(Debug, Deserialize)]
struct ConstantsFile {
    g11: f64,
    g12: f64,
    g21: f64,
    g22: f64,
    kappa1: f64,
    kappa2: f64,
    sigma1_sq: f64,
    sigma2_sq: f64,
}

impl ChannelConstants {
    /// Builds the constants from channel gains, correlations and noise variances.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        g11: f64,
        g12: f64,
        g21: f64,
        g22: f64,
        kappa1: f64,
        kappa2: f64,
        sigma1_sq: f64,
        sigma2_sq: f64,
    ) -> Result<Self> {
        for (name, g) in [("g11", g11), ("g12", g12), ("g21", g21), ("g22", g22)] {
            if !(g > 0.0 && g.is_finite()) {
                return Err(domain(format!("{name} must be positive and finite, got {g}")));
            }
        }
        for (i, k) in [(1, kappa1), (2, kappa2)] {
            if !(k > 0.0 && k < 1.0) {
                return Err(domain(format!("kappa{i} must lie in (0, 1), got {k}")));
            }
        }
        if !(sigma1_sq > 0.0 && sigma1_sq.is_finite() && sigma2_sq > 0.0 && sigma2_sq.is_finite()) {
            return Err(domain("noise variances must be positive and finite"));
        }
        let s1 = (1.0 - kappa1 * kappa1).sqrt();
        let s2 = (1.0 - kappa2 * kappa2).sqrt();
        Ok(Self {
            g11,
            g12,
            g21,
            g22,
            kappa1,
            kappa2,
            alpha1: g11 * kappa1,
            alpha2: g22 * kappa2,
            alpha1_tilde: g11 * s1,
            alpha2_tilde: g22 * s2,
            beta1: g12 * kappa1,
            beta2: g21 * kappa2,
            beta1_tilde: g12 * s1,
            beta2_tilde: g21 * s2,
            rho1: 1.0 - s1,
            rho2: 1.0 - s2,
            zeta1: sigma2_sq / (g12 * g12),
            zeta2: sigma1_sq / (g21 * g21),
            sigma1_sq,
            sigma2_sq,
        })
    }

    /// The same channel with the roles of link 1 and link 2 interchanged.
    pub fn swapped(&self) -> Self {
        Self::new(
            self.g22,
            self.g21,
            self.g12,
            self.g11,
            self.kappa2,
            self.kappa1,
            self.sigma2_sq,
            self.sigma1_sq,
        )
        .expect("swapping indices preserves validity")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let f: ConstantsFile = serde_json::from_str(s)?;
        Self::new(f.g11, f.g12, f.g21, f.g22, f.kappa1, f.kappa2, f.sigma1_sq, f.sigma2_sq)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Maximum SNR of link 1 (single-user point), `g11^2 / sigma1^2`.
    pub fn gamma1_max(&self) -> f64 {
        self.g11 * self.g11 / self.sigma1_sq
    }
}

fn kappa(direct: &[Complex64], cross: &[Complex64]) -> f64 {
    inner(cross, direct).norm() / (norm(cross) * norm(direct))
}

/// Reduces a realization to its scalar constants.
pub fn derive_constants(ch: &ChannelRealization) -> Result<ChannelConstants> {
    let k1 = kappa(&ch.h11, &ch.h12);
    let k2 = kappa(&ch.h22, &ch.h21);
    for (i, j, k) in [(1, 2, k1), (2, 1, k2)] {
        if k > 1.0 - COLINEAR_MARGIN {
            return Err(Error::ColinearChannels(i, j, k));
        }
        if k < ORTHOGONAL_MARGIN {
            return Err(Error::OrthogonalChannels(i, j, k));
        }
    }
    ChannelConstants::new(
        norm(&ch.h11),
        norm(&ch.h12),
        norm(&ch.h21),
        norm(&ch.h22),
        k1,
        k2,
        ch.sigma1_sq,
        ch.sigma2_sq,
    )
}

/// Canonical real two-antenna realization with the given constants:
/// `h_ii = g_ii (1, 0)` and `h_ij = g_ij (kappa_i, sqrt(1 - kappa_i^2))`.
#[allow(clippy::too_many_arguments)]
pub fn synth_channels(
    g11: f64,
    g12: f64,
    g21: f64,
    g22: f64,
    kappa1: f64,
    kappa2: f64,
    sigma1_sq: f64,
    sigma2_sq: f64,
) -> Result<ChannelRealization> {
    // Validates the whole parameter set.
    ChannelConstants::new(g11, g12, g21, g22, kappa1, kappa2, sigma1_sq, sigma2_sq)?;
    let re = |v: [f64; 2]| -> CVector { v.iter().map(|&x| Complex64::new(x, 0.0)).collect() };
    ChannelRealization::new(
        re([g11, 0.0]),
        re([g12 * kappa1, g12 * (1.0 - kappa1 * kappa1).sqrt()]),
        re([g21 * kappa2, g21 * (1.0 - kappa2 * kappa2).sqrt()]),
        re([g22, 0.0]),
        sigma1_sq,
        sigma2_sq,
    )
}

/// Canonical realization reproducing `c`.
pub fn synth_from_constants(c: &ChannelConstants) -> ChannelRealization {
    synth_channels(c.g11, c.g12, c.g21, c.g22, c.kappa1, c.kappa2, c.sigma1_sq, c.sigma2_sq)
        .expect("constants are already validated")
}

/// I.i.d. CN(0, 1) channel entries with unit noise variances.
///
/// The generator is ChaCha8 (`rand_chacha`) seeded via `seed_from_u64`, so a
/// seed gives the same realization on every platform. Realizations violating
/// the colinear/orthogonal margins are redrawn from the same stream.
pub fn random_rayleigh(n_t: usize, seed: u64) -> Result<ChannelRealization> {
    if n_t < 2 {
        return Err(domain(format!("n_T must be at least 2, got {n_t}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..RAYLEIGH_MAX_REDRAWS {
        let mut draw = || -> CVector {
            (0..n_t)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re * scale, im * scale)
                })
                .collect()
        };
        let (h11, h12, h21, h22) = (draw(), draw(), draw(), draw());
        let ch = ChannelRealization::new(h11, h12, h21, h22, 1.0, 1.0)?;
        if derive_constants(&ch).is_ok() {
            return Ok(ch);
        }
    }
    Err(Error::Internal(format!(
        "no valid Rayleigh draw after {RAYLEIGH_MAX_REDRAWS} attempts"
    )))
}

/// Named channel settings with symmetric gains g11 = g22 = 1, g12 = g21 = 2.
/// Noise variances are set to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Low spatial correlation, kappa1 = kappa2 = 0.3.
    Fig2,
    /// High spatial correlation, kappa1 = kappa2 = 0.85.
    Fig3,
    /// Mixed correlation, kappa1 = 0.85, kappa2 = 0.3.
    Fig4,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Fig2, Preset::Fig3, Preset::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }

    pub fn kappas(self) -> (f64, f64) {
        match self {
            Preset::Fig2 => (0.3, 0.3),
            Preset::Fig3 => (0.85, 0.85),
            Preset::Fig4 => (0.85, 0.3),
        }
    }

    pub fn constants(self) -> ChannelConstants {
        let (k1, k2) = self.kappas();
        ChannelConstants::new(1.0, 2.0, 2.0, 1.0, k1, k2, 1.0, 1.0).expect("preset is valid")
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            _ => Err(domain(format!("unknown preset '{s}'"))),
        }
    }
}
