//! Received powers and achievable rate pairs for the four decoding scenarios.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::error::{domain, Error, Result};
use crate::vector::{inner, norm_sqr, normalized, project_perp, CVector};

/// Slack allowed on the unit power constraint.
pub const POWER_SLACK: f64 = 1e-12;

/// Transmit weight vector with `||w||^2 <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer(CVector);

impl Beamformer {
    pub fn new(w: CVector) -> Result<Self> {
        let p = norm_sqr(&w);
        if !(p <= 1.0 + POWER_SLACK) {
            return Err(domain(format!("beamformer power {p} exceeds 1")));
        }
        Ok(Self(w))
    }

    pub fn zero(n_t: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n_t])
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn power(&self) -> f64 {
        norm_sqr(&self.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Scales the vector by `sqrt(t)`, i.e. transmits with power fraction `t`.
    pub fn with_power_fraction(&self, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(domain(format!("power fraction {t} outside [0, 1]")));
        }
        let s = Complex64::new(t.sqrt(), 0.0);
        Ok(Self(self.0.iter().map(|a| a * s).collect()))
    }
}

/// Decoding strategies of (RX1, RX2): `d` decodes the interference first,
/// `n` treats it as noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecodingScenario {
    NN,
    DN,
    ND,
    DD,
}

impl DecodingScenario {
    pub const ALL: [DecodingScenario; 4] =
        [DecodingScenario::NN, DecodingScenario::DN, DecodingScenario::ND, DecodingScenario::DD];

    pub fn as_str(self) -> &'static str {
        match self {
            DecodingScenario::NN => "nn",
            DecodingScenario::DN => "dn",
            DecodingScenario::ND => "nd",
            DecodingScenario::DD => "dd",
        }
    }

    /// The scenario seen after interchanging the link indices.
    pub fn swapped(self) -> Self {
        match self {
            DecodingScenario::DN => DecodingScenario::ND,
            DecodingScenario::ND => DecodingScenario::DN,
            s => s,
        }
    }
}

impl fmt::Display for DecodingScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecodingScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nn" => Ok(DecodingScenario::NN),
            "dn" => Ok(DecodingScenario::DN),
            "nd" => Ok(DecodingScenario::ND),
            "dd" => Ok(DecodingScenario::DD),
            _ => Err(domain(format!("unknown decoding scenario '{s}'"))),
        }
    }
}

/// Parameters of the beamformer pair that produced a rate point. Only the
/// fields the producing method uses are set.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RateParams {
    pub x1: Option<f64>,
    pub y1: Option<f64>,
    pub x2: Option<f64>,
    pub y2: Option<f64>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    /// Free-form branch tag (e.g. which subproblem won for the dd region).
    pub case: Option<&'static str>,
}

impl RateParams {
    pub fn x(x1: f64, x2: f64) -> Self {
        Self { x1: Some(x1), x2: Some(x2), ..Self::default() }
    }

    /// Interchanges the roles of link 1 and link 2.
    pub fn swapped(&self) -> Self {
        Self {
            x1: self.x2,
            y1: self.y2,
            x2: self.x1,
            y2: self.y1,
            lambda1: self.lambda2,
            lambda2: self.lambda1,
            case: self.case,
        }
    }
}

/// A rate pair in bits per channel use.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
    pub scenario: DecodingScenario,
    pub params: RateParams,
}

impl RatePoint {
    pub fn new(r1: f64, r2: f64, scenario: DecodingScenario) -> Self {
        Self { r1, r2, scenario, params: RateParams::default() }
    }

    pub fn with_params(mut self, params: RateParams) -> Self {
        self.params = params;
        self
    }

    /// Mirror image across the diagonal, for results computed on swapped indices.
    pub fn swapped(&self) -> Self {
        Self {
            r1: self.r2,
            r2: self.r1,
            scenario: self.scenario.swapped(),
            params: self.params.swapped(),
        }
    }
}

/// Desired and interference powers at both receivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Powers {
    /// `|h11^H w1|^2`, desired power at RX1.
    pub p1: f64,
    /// `|h21^H w2|^2`, interference at RX1.
    pub q1: f64,
    /// `|h22^H w2|^2`, desired power at RX2.
    pub p2: f64,
    /// `|h12^H w1|^2`, interference at RX2.
    pub q2: f64,
}

pub fn received_powers(
    w1: &Beamformer,
    w2: &Beamformer,
    ch: &ChannelRealization,
) -> Result<Powers> {
    let n = ch.n_t();
    for w in [w1, w2] {
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.len() });
        }
    }
    let pw = |h: &[Complex64], w: &Beamformer| inner(h, w.as_slice()).norm_sqr();
    Ok(Powers {
        p1: pw(&ch.h11, w1),
        q1: pw(&ch.h21, w2),
        p2: pw(&ch.h22, w2),
        q2: pw(&ch.h12, w1),
    })
}

/// SINR pair `(gamma1, gamma2)` for given powers; rates are `log2(1 + gamma)`.
pub fn sinr_pair(
    scenario: DecodingScenario,
    pw: &Powers,
    sigma1_sq: f64,
    sigma2_sq: f64,
) -> (f64, f64) {
    let Powers { p1, q1, p2, q2 } = *pw;
    match scenario {
        DecodingScenario::NN => (p1 / (q1 + sigma1_sq), p2 / (q2 + sigma2_sq)),
        DecodingScenario::DN => {
            (p1 / sigma1_sq, (q1 / (p1 + sigma1_sq)).min(p2 / (q2 + sigma2_sq)))
        }
        DecodingScenario::ND => {
            ((q2 / (p2 + sigma2_sq)).min(p1 / (q1 + sigma1_sq)), p2 / sigma2_sq)
        }
        DecodingScenario::DD => (
            (p1 / sigma1_sq).min(q2 / (p2 + sigma2_sq)),
            (p2 / sigma2_sq).min(q1 / (p1 + sigma1_sq)),
        ),
    }
}

pub fn rate(sinr: f64) -> f64 {
    sinr.ln_1p() / std::f64::consts::LN_2
}

/// SINR needed for a rate, `2^r - 1`.
pub fn sinr_for_rate(r: f64) -> f64 {
    (r * std::f64::consts::LN_2).exp_m1()
}

pub fn rates_from_powers(
    scenario: DecodingScenario,
    pw: &Powers,
    sigma1_sq: f64,
    sigma2_sq: f64,
) -> RatePoint {
    let (g1, g2) = sinr_pair(scenario, pw, sigma1_sq, sigma2_sq);
    RatePoint::new(rate(g1), rate(g2), scenario)
}

/// Maximum achievable rate pair of a beamformer pair under `scenario`.
pub fn rate_pair(
    scenario: DecodingScenario,
    w1: &Beamformer,
    w2: &Beamformer,
    ch: &ChannelRealization,
) -> Result<RatePoint> {
    let pw = received_powers(w1, w2, ch)?;
    Ok(rates_from_powers(scenario, &pw, ch.sigma1_sq, ch.sigma2_sq))
}

/// `x * e_par + y * e_perp`, where `e_par` and `e_perp` are the unit vectors
/// along the projections of `target` onto span(`anchor`) and its complement.
pub fn split_beamformer(
    x: f64,
    y: f64,
    anchor: &[Complex64],
    target: &[Complex64],
) -> Result<Beamformer> {
    if !(x >= 0.0 && y >= 0.0 && x * x + y * y <= 1.0 + POWER_SLACK) {
        return Err(domain(format!("(x, y) = ({x}, {y}) outside the quarter disc")));
    }
    let par = normalized(&crate::vector::project(anchor, target));
    let perp = normalized(&project_perp(anchor, target));
    let w = par.iter().zip(&perp).map(|(a, b)| a * x + b * y).collect();
    Beamformer::new(w)
}

/// Maximum-ratio beamformer `h_ii / ||h_ii||` of transmitter `i`.
pub fn mr_beamformer(i: usize, ch: &ChannelRealization) -> Beamformer {
    Beamformer(normalized(ch.direct(i)))
}

/// Zero-forcing beamformer: `h_ii` projected off the crosstalk channel `h_ij`, normalized.
pub fn zf_beamformer(i: usize, ch: &ChannelRealization) -> Beamformer {
    Beamformer(normalized(&project_perp(ch.crosstalk(i), ch.direct(i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{derive_constants, random_rayleigh, synth_channels};
    use crate::vector::norm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Beamformer {
        let v: CVector =
            (0..n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        Beamformer::new(normalized(&v)).unwrap()
    }

    #[test]
    fn mr_gives_full_direct_power() {
        let ch = random_rayleigh(4, 3).unwrap();
        let pw = received_powers(&mr_beamformer(1, &ch), &mr_beamformer(2, &ch), &ch).unwrap();
        assert!((pw.p1 - norm_sqr(&ch.h11)).abs() < 1e-12 * pw.p1);
        assert!((pw.p2 - norm_sqr(&ch.h22)).abs() < 1e-12 * pw.p2);
    }

    #[test]
    fn zf_nulls_interference_and_keeps_orthogonal_power() {
        let ch = random_rayleigh(4, 9).unwrap();
        let k = derive_constants(&ch).unwrap();
        let pw = received_powers(&zf_beamformer(1, &ch), &zf_beamformer(2, &ch), &ch).unwrap();
        assert!(pw.q1 < 1e-24 && pw.q2 < 1e-24);
        // TX2's ZF delivers ||Pi_perp(h21) h22||^2, which is alpha2_tilde^2.
        assert!((pw.p2 - k.alpha2_tilde.powi(2)).abs() < 1e-12 * pw.p2);
        assert!((pw.p1 - k.alpha1_tilde.powi(2)).abs() < 1e-12 * pw.p1);
    }

    #[test]
    fn mr_on_canonical_channel() {
        let ch = synth_channels(1.0, 2.0, 2.0, 1.0, 0.3, 0.3, 1.0, 1.0).unwrap();
        let w = mr_beamformer(1, &ch);
        assert!((w.as_slice()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let z = zf_beamformer(1, &ch);
        assert!(inner(&ch.h12, z.as_slice()).norm() < 1e-12);
        assert!((norm(z.as_slice()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn powers_match_direct_inner_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ch = random_rayleigh(5, 2).unwrap();
        for _ in 0..20 {
            let (w1, w2) = (random_unit(5, &mut rng), random_unit(5, &mut rng));
            let pw = received_powers(&w1, &w2, &ch).unwrap();
            let direct = |h: &CVector, w: &Beamformer| {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..h.len() {
                    acc += h[k].conj() * w.as_slice()[k];
                }
                acc.re * acc.re + acc.im * acc.im
            };
            assert!((pw.p1 - direct(&ch.h11, &w1)).abs() < 1e-13);
            assert!((pw.q1 - direct(&ch.h21, &w2)).abs() < 1e-13);
            assert!((pw.p2 - direct(&ch.h22, &w2)).abs() < 1e-13);
            assert!((pw.q2 - direct(&ch.h12, &w1)).abs() < 1e-13);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let ch = random_rayleigh(3, 1).unwrap();
        let w = Beamformer::zero(2);
        assert!(matches!(
            received_powers(&w, &w, &ch),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn overpowered_beamformer_is_rejected() {
        let w = vec![Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)];
        assert!(Beamformer::new(w).is_err());
    }

    #[test]
    fn nn_unit_gain_single_user_rate() {
        let ch = synth_channels(1.0, 2.0, 2.0, 1.0, 0.3, 0.3, 1.0, 1.0).unwrap();
        let pt =
            rate_pair(DecodingScenario::NN, &mr_beamformer(1, &ch), &zf_beamformer(2, &ch), &ch)
                .unwrap();
        assert!((pt.r1 - 1.0).abs() < 1e-12);
        let k = derive_constants(&ch).unwrap();
        let expected = (1.0 + k.alpha2_tilde.powi(2) / (k.beta1.powi(2) + 1.0)).log2();
        assert!((pt.r2 - expected).abs() < 1e-12);
        assert!((k.alpha2_tilde - 0.91f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dd_with_silent_tx2() {
        let ch = random_rayleigh(3, 4).unwrap();
        let w1 = mr_beamformer(1, &ch);
        let w2 = Beamformer::zero(3);
        let pt = rate_pair(DecodingScenario::DD, &w1, &w2, &ch).unwrap();
        let pw = received_powers(&w1, &w2, &ch).unwrap();
        let expected = (1.0 + (pw.p1 / ch.sigma1_sq).min(pw.q2 / ch.sigma2_sq)).log2();
        assert!((pt.r1 - expected).abs() < 1e-12);
        assert_eq!(pt.r2, 0.0);
    }

    #[test]
    fn phase_rotation_leaves_rates_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ch = random_rayleigh(3, 12).unwrap();
        let rot = ch.with_phases([0.3, -1.2, 2.2, 0.7]);
        for _ in 0..10 {
            let (w1, w2) = (random_unit(3, &mut rng), random_unit(3, &mut rng));
            for s in DecodingScenario::ALL {
                let a = rate_pair(s, &w1, &w2, &ch).unwrap();
                let b = rate_pair(s, &w1, &w2, &rot).unwrap();
                assert!((a.r1 - b.r1).abs() < 1e-12 && (a.r2 - b.r2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn decoding_interference_never_hurts_link1() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ch = random_rayleigh(4, 21).unwrap();
        for _ in 0..50 {
            let (w1, w2) = (random_unit(4, &mut rng), random_unit(4, &mut rng));
            let nn = rate_pair(DecodingScenario::NN, &w1, &w2, &ch).unwrap();
            let dn = rate_pair(DecodingScenario::DN, &w1, &w2, &ch).unwrap();
            assert!(dn.r1 >= nn.r1);
        }
        let w1 = random_unit(4, &mut rng);
        let w2 = zf_beamformer(2, &ch);
        let nn = rate_pair(DecodingScenario::NN, &w1, &w2, &ch).unwrap();
        let dn = rate_pair(DecodingScenario::DN, &w1, &w2, &ch).unwrap();
        assert!((dn.r1 - nn.r1).abs() < 1e-12);
    }

    #[test]
    fn dn_link2_rate_is_the_tighter_of_two_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let ch = random_rayleigh(3, 30).unwrap();
        for _ in 0..50 {
            let (w1, w2) = (random_unit(3, &mut rng), random_unit(3, &mut rng));
            let pw = received_powers(&w1, &w2, &ch).unwrap();
            let dn = rate_pair(DecodingScenario::DN, &w1, &w2, &ch).unwrap();
            let own = rate(pw.p2 / (pw.q2 + ch.sigma2_sq));
            let sic = rate(pw.q1 / (pw.p1 + ch.sigma1_sq));
            assert!(dn.r2 <= own + 1e-15 && dn.r2 <= sic + 1e-15);
            assert!((dn.r2 - own).abs() < 1e-15 || (dn.r2 - sic).abs() < 1e-15);
        }
    }

    #[test]
    fn moving_tx2_towards_zf_helps_link1() {
        let ch = random_rayleigh(4, 17).unwrap();
        let w1 = mr_beamformer(1, &ch);
        let mr = mr_beamformer(2, &ch);
        let zf = zf_beamformer(2, &ch);
        let mut last = f64::NEG_INFINITY;
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let mix: CVector = mr
                .as_slice()
                .iter()
                .zip(zf.as_slice())
                .map(|(a, b)| a * (1.0 - t) + b * t)
                .collect();
            let w2 = Beamformer::new(normalized(&mix)).unwrap();
            let r1 = rate_pair(DecodingScenario::NN, &w1, &w2, &ch).unwrap().r1;
            assert!(r1 >= last - 1e-12);
            last = r1;
        }
    }

    #[test]
    fn rate_sinr_inverse() {
        for r in [0.0, 0.3, 1.0, 4.5] {
            assert!((rate(sinr_for_rate(r)) - r).abs() < 1e-14);
        }
    }
}
