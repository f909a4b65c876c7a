//! Drift `G` of the original system and the correction fields `F` used by the
//! redesign: linear output injection, HOSM signed powers, and the composite
//! field built through the observer-canonical transform.
//!
//! Gains are stored signed. A stabilizing design has negative `k_i` / `l_i`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{ensure_hurwitz, invert, output_injection, shift_matrix};

/// `⌈x⌋^a = |x|^a sign(x)`, with `⌈x⌋^0 = sign(x)` and `sign(0) = 0`.
#[inline]
pub fn signed_power(x: f64, a: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if a == 0.0 {
        x.signum()
    } else if a == 1.0 {
        x
    } else {
        x.abs().powf(a).copysign(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedPowerTerm {
    pub coefficient: f64,
    pub exponent: f64,
}

impl SignedPowerTerm {
    pub fn new(coefficient: f64, exponent: f64) -> Self {
        Self {
            coefficient,
            exponent,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficient * signed_power(x, self.exponent)
    }
}

/// Scalar map `g(x) = Σ c_j ⌈x⌋^{e_j}`; a linear term is exponent 1.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignedPowerSum(pub Vec<SignedPowerTerm>);

impl SignedPowerSum {
    pub fn single(coefficient: f64, exponent: f64) -> Self {
        Self(vec![SignedPowerTerm::new(coefficient, exponent)])
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().map(|t| t.eval(x)).sum()
    }

    fn validate(&self) -> Result<()> {
        for t in &self.0 {
            if !(t.coefficient.is_finite() && t.exponent.is_finite() && t.exponent >= 0.0) {
                return Err(Error::invalid(format!(
                    "signed-power term needs finite coefficient and nonnegative exponent, got {t:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Drift `G(x₁)` with components `l_i ⌈x₁⌋^{(n - i m)/n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftG {
    m: u8,
    gains: Vec<f64>,
    exponents: Vec<f64>,
}

impl DriftG {
    /// `m = 0` gives a linear drift whose companion polynomial
    /// `sⁿ - l₁sⁿ⁻¹ - … - l_n` must be Hurwitz; `m = 1` gives the HOSM drift.
    pub fn new(m: u8, gains: Vec<f64>) -> Result<Self> {
        let n = gains.len();
        if n == 0 {
            return Err(Error::invalid("drift needs at least one gain"));
        }
        if m > 1 {
            return Err(Error::invalid(format!("drift m must be 0 or 1, got {m}")));
        }
        if gains.iter().any(|g| !g.is_finite()) {
            return Err(Error::invalid("drift gains must be finite"));
        }
        if m == 0 {
            ensure_hurwitz(&output_injection(&gains), "linear drift G")?;
        }
        let exponents = (1..=n)
            .map(|i| (n as f64 - (i as f64) * m as f64) / n as f64)
            .collect();
        Ok(Self {
            m,
            gains,
            exponents,
        })
    }

    pub fn n(&self) -> usize {
        self.gains.len()
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    #[inline]
    pub fn eval_into(&self, x1: f64, out: &mut [f64]) {
        for ((o, l), e) in out.iter_mut().zip(&self.gains).zip(&self.exponents) {
            *o = l * signed_power(x1, *e);
        }
    }

    pub fn eval(&self, x1: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        self.eval_into(x1, &mut out);
        out
    }
}

/// `Γ = A₀ - αM`, its characteristic coefficients `a`, and `Q = (𝒱 𝒪(Γ, C))⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalTransform {
    pub gamma: DMatrix<f64>,
    /// `a₁ … a_n` of `sⁿ + a₁sⁿ⁻¹ + … + a_n`.
    pub a: Vec<f64>,
    pub q: DMatrix<f64>,
}

pub fn build_canonical_transform(n: usize, alpha: f64) -> Result<CanonicalTransform> {
    if n == 0 {
        return Err(Error::invalid("canonical transform needs n >= 1"));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    let mut gamma = shift_matrix(n);
    for i in 0..n {
        gamma[(i, i)] = -alpha * i as f64;
    }

    // coefficients of s (s + α) … (s + (n-1)α), highest degree first
    let mut poly = vec![1.0];
    for i in 0..n {
        let root = alpha * i as f64;
        let mut next = vec![0.0; poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k] += c;
            next[k + 1] += c * root;
        }
        poly = next;
    }
    let a: Vec<f64> = poly[1..].to_vec();

    let mut obs = DMatrix::zeros(n, n);
    let mut row = DMatrix::from_fn(1, n, |_, j| if j == 0 { 1.0 } else { 0.0 });
    for i in 0..n {
        obs.set_row(i, &row.row(0));
        row = &row * &gamma;
    }
    let v = DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Greater => a[i - j - 1],
        std::cmp::Ordering::Less => 0.0,
    });
    let q = invert(&(v * obs)).map_err(|_| Error::Singular("canonical transform V·O"))?;
    Ok(CanonicalTransform { gamma, a, q })
}

/// Gains `k_i` and maps `g_i` of the autonomous system in canonical coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalTerms {
    pub k: Vec<f64>,
    pub g: Vec<SignedPowerSum>,
}

impl CanonicalTerms {
    fn validate(&self, n: usize, what: &str) -> Result<()> {
        if self.k.len() != n || self.g.len() != n {
            return Err(Error::invalid(format!("{what}: need {n} gains and {n} maps")));
        }
        if self.k.iter().any(|k| !k.is_finite()) {
            return Err(Error::invalid(format!("{what}: gains must be finite")));
        }
        self.g.iter().try_for_each(SignedPowerSum::validate)
    }
}

/// `F(x₁) = Q [k_i g_i(x₁) + a_i x₁]_i`, optionally switching its terms once the
/// auxiliary time passes `tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalField {
    pub alpha: f64,
    pub terms: CanonicalTerms,
    pub switched: Option<(f64, CanonicalTerms)>,
    pub transform: CanonicalTransform,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorrectionField {
    Linear { gains: Vec<f64> },
    HosmPowers { gains: Vec<f64> },
    CanonicalComposite(Box<CanonicalField>),
}

impl CorrectionField {
    /// `F(z₁) = K z₁`; `A₀ + K C` must be Hurwitz.
    pub fn linear(gains: Vec<f64>) -> Result<Self> {
        if gains.is_empty() || gains.iter().any(|g| !g.is_finite()) {
            return Err(Error::invalid("linear field needs finite gains"));
        }
        ensure_hurwitz(&output_injection(&gains), "A0 + K C")?;
        Ok(Self::Linear { gains })
    }

    /// `F_i(z₁) = l_i ⌈z₁⌋^{(n-i)/n}`.
    pub fn hosm(gains: Vec<f64>) -> Result<Self> {
        if gains.is_empty() || gains.iter().any(|g| !g.is_finite()) {
            return Err(Error::invalid("HOSM field needs finite gains"));
        }
        Ok(Self::HosmPowers { gains })
    }

    pub fn canonical(
        alpha: f64,
        terms: CanonicalTerms,
        switched: Option<(f64, CanonicalTerms)>,
    ) -> Result<Self> {
        let n = terms.k.len();
        terms.validate(n, "canonical field")?;
        if let Some((tau, after)) = &switched {
            if !(tau.is_finite() && *tau >= 0.0) {
                return Err(Error::invalid("theta switch time must be finite and nonnegative"));
            }
            after.validate(n, "canonical field after switch")?;
        }
        let transform = build_canonical_transform(n, alpha)?;
        Ok(Self::CanonicalComposite(Box::new(CanonicalField {
            alpha,
            terms,
            switched,
            transform,
        })))
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Linear { gains } | Self::HosmPowers { gains } => gains.len(),
            Self::CanonicalComposite(c) => c.terms.k.len(),
        }
    }

    /// Auxiliary time after which a switched composite field changes terms.
    pub fn switch_tau(&self) -> Option<f64> {
        match self {
            Self::CanonicalComposite(c) => c.switched.as_ref().map(|(tau, _)| *tau),
            _ => None,
        }
    }

    /// Writes `F(z₁)` into `out`. `after_switch` selects the post-switch terms
    /// of a switched composite field and is ignored otherwise.
    #[inline]
    pub fn eval_into(&self, z1: f64, after_switch: bool, out: &mut [f64]) {
        let n = out.len();
        match self {
            Self::Linear { gains } => {
                for (o, k) in out.iter_mut().zip(gains) {
                    *o = k * z1;
                }
            }
            Self::HosmPowers { gains } => {
                for (i, (o, l)) in out.iter_mut().zip(gains).enumerate() {
                    *o = l * signed_power(z1, (n - 1 - i) as f64 / n as f64);
                }
            }
            Self::CanonicalComposite(c) => {
                let terms = match (&c.switched, after_switch) {
                    (Some((_, after)), true) => after,
                    _ => &c.terms,
                };
                let mut inner = [0.0; 16];
                let inner = &mut inner[..n];
                for i in 0..n {
                    inner[i] = terms.k[i] * terms.g[i].eval(z1) + c.transform.a[i] * z1;
                }
                for (i, o) in out.iter_mut().enumerate() {
                    *o = (0..n).map(|j| c.transform.q[(i, j)] * inner[j]).sum();
                }
            }
        }
    }

    pub fn eval(&self, z1: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        self.eval_into(z1, false, &mut out);
        out
    }
}
