//! Independently checkable sub-eigenvectors, super-eigenvectors and
//! eigenpairs, plus the sandwich and family checks built on them.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cone::{ConeVector, ExtendedRatio};
use crate::error::{Error, Result};
use crate::operators::{OperatorSpec, SelectionWitness};
use crate::oracles::{perron_root, policy_enumeration, PolicyIndex};
use crate::solver::{cw_upper, eigen_solve, growth_rate, EigenSolveResult, SolverConfig};

/// Default relative componentwise slack.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

/// `h(u) <= lambda u` with `u` interior.
#[derive(Clone, Debug, PartialEq)]
pub struct SubEigenCert {
    u: ConeVector,
    lambda: f64,
}

impl SubEigenCert {
    pub fn new(u: ConeVector, lambda: f64) -> Result<Self> {
        u.require_interior()?;
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("sub-eigenvalue must be positive, got {lambda}")));
        }
        Ok(Self { u, lambda })
    }

    pub fn u(&self) -> &ConeVector {
        &self.u
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// `h(v) >= mu v` with `v` nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperEigenCert {
    v: ConeVector,
    mu: f64,
}

impl SuperEigenCert {
    pub fn new(v: ConeVector, mu: f64) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::InvalidArgument(format!("super-eigenvalue must be nonnegative, got {mu}")));
        }
        Ok(Self { v, mu })
    }

    pub fn v(&self) -> &ConeVector {
        &self.v
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

/// `||h(x) - r x||_inf <= tol ||x||_inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPairCert {
    x: ConeVector,
    r: f64,
    tol: f64,
}

impl EigenPairCert {
    pub fn new(x: ConeVector, r: f64, tol: f64) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("eigenvalue must be nonnegative, got {r}")));
        }
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self { x, r, tol })
    }

    /// Pair record for a solver result, with tolerance
    /// `max(2 residual, 1e-12 max(1, r))`.
    pub fn from_solve(res: &EigenSolveResult) -> Result<Self> {
        Self::new(res.eigvec.clone(), res.radius, pair_tolerance(res.residual, res.radius))
    }

    pub fn x(&self) -> &ConeVector {
        &self.x
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

pub(crate) fn pair_tolerance(residual: f64, r: f64) -> f64 {
    (2.0 * residual).max(1e-12 * r.max(1.0))
}

/// Wire form of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    Sub {
        vector: Vec<f64>,
        value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    Super {
        vector: Vec<f64>,
        value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    Pair {
        vector: Vec<f64>,
        value: f64,
        tol: f64,
    },
}

impl From<&SubEigenCert> for Certificate {
    fn from(c: &SubEigenCert) -> Self {
        Certificate::Sub { vector: c.u.coords().to_vec(), value: c.lambda, tol: None }
    }
}

impl From<&SuperEigenCert> for Certificate {
    fn from(c: &SuperEigenCert) -> Self {
        Certificate::Super { vector: c.v.coords().to_vec(), value: c.mu, tol: None }
    }
}

impl From<&EigenPairCert> for Certificate {
    fn from(c: &EigenPairCert) -> Self {
        Certificate::Pair { vector: c.x.coords().to_vec(), value: c.r, tol: c.tol }
    }
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Sub { .. } => "sub",
            Certificate::Super { .. } => "super",
            Certificate::Pair { .. } => "pair",
        }
    }

    /// Validates the record and checks it against `spec`.
    pub fn check(&self, spec: &OperatorSpec) -> Result<Verdict> {
        match self {
            Certificate::Sub { vector, value, tol } => {
                let cert = SubEigenCert::new(ConeVector::new(vector.clone())?, *value)?;
                check_sub_with_tol(spec, &cert, tol.unwrap_or(DEFAULT_REL_TOL))
            }
            Certificate::Super { vector, value, tol } => {
                let cert = SuperEigenCert::new(ConeVector::new(vector.clone())?, *value)?;
                check_super_with_tol(spec, &cert, tol.unwrap_or(DEFAULT_REL_TOL))
            }
            Certificate::Pair { vector, value, tol } => check_pair(spec, &EigenPairCert::new(ConeVector::new(vector.clone())?, *value, *tol)?),
        }
    }
}

/// Reads certificates from a single record, an array of records, an object
/// carrying a `"certificate"` record, or a solver result with `radius`,
/// `eigvec` and `residual`.
pub fn parse_certificates(value: &Value) -> Result<Vec<Certificate>> {
    let bad = |e: serde_json::Error| Error::InvalidArgument(format!("bad certificate: {e}"));
    match value {
        Value::Array(items) => items.iter().map(|v| serde_json::from_value(v.clone()).map_err(bad)).collect(),
        Value::Object(obj) if obj.contains_key("kind") => Ok(vec![serde_json::from_value(value.clone()).map_err(bad)?]),
        Value::Object(obj) if obj.contains_key("certificate") => parse_certificates(&obj["certificate"]),
        Value::Object(obj) if obj.contains_key("radius") && obj.contains_key("eigvec") => {
            let r = obj["radius"].as_f64().ok_or_else(|| Error::InvalidArgument("radius must be a number".into()))?;
            let vector: Vec<f64> = serde_json::from_value(obj["eigvec"].clone()).map_err(bad)?;
            let residual = obj.get("residual").and_then(Value::as_f64).unwrap_or(0.0);
            Ok(vec![Certificate::Pair { vector, value: r, tol: pair_tolerance(residual, r) }])
        }
        _ => Err(Error::InvalidArgument("expected a certificate, an array of certificates or a solve result".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub kind: &'static str,
    pub accepted: bool,
    pub value: f64,
    /// Coordinate with the largest (relative) violation.
    pub worst_index: Option<usize>,
    /// Largest relative violation; nonpositive when every inequality holds strictly.
    pub worst_violation: f64,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.accepted { "PASS" } else { "FAIL" };
        write!(f, "{status} {} value={:e} worst_violation={:e}", self.kind, self.value, self.worst_violation)?;
        if let (false, Some(i)) = (self.accepted, self.worst_index) {
            write!(f, " index={i}")?;
        }
        Ok(())
    }
}

fn image(spec: &OperatorSpec, x: &ConeVector) -> Result<ConeVector> {
    spec.restrict_to_cone().apply(x)
}

fn worst(violations: impl Iterator<Item = f64>) -> (usize, f64) {
    violations
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc })
}

pub fn check_sub(spec: &OperatorSpec, cert: &SubEigenCert) -> Result<Verdict> {
    check_sub_with_tol(spec, cert, DEFAULT_REL_TOL)
}

/// Accepts iff `h(u)_i <= lambda u_i (1 + rel_tol)` for every `i`.
pub fn check_sub_with_tol(spec: &OperatorSpec, cert: &SubEigenCert, rel_tol: f64) -> Result<Verdict> {
    let hu = image(spec, &cert.u)?;
    let l = cert.lambda;
    let (i, v) = worst(hu.coords().iter().zip(cert.u.coords()).map(|(h, u)| (h - l * u) / (l * u)));
    let accepted = v <= rel_tol;
    Ok(Verdict { kind: "sub", accepted, value: l, worst_index: Some(i), worst_violation: v })
}

pub fn check_super(spec: &OperatorSpec, cert: &SuperEigenCert) -> Result<Verdict> {
    check_super_with_tol(spec, cert, DEFAULT_REL_TOL)
}

/// Accepts iff `h(v)_i >= mu v_i (1 - rel_tol)` for every `i`. The
/// violation is measured relative to `mu ||v||_inf`.
pub fn check_super_with_tol(spec: &OperatorSpec, cert: &SuperEigenCert, rel_tol: f64) -> Result<Verdict> {
    let hv = image(spec, &cert.v)?;
    let m = cert.mu;
    if m == 0.0 {
        return Ok(Verdict { kind: "super", accepted: true, value: 0.0, worst_index: None, worst_violation: 0.0 });
    }
    let scale = m * cert.v.sup_norm();
    let (i, v) = worst(hv.coords().iter().zip(cert.v.coords()).map(|(h, x)| (m * x - h) / scale));
    let accepted = hv.coords().iter().zip(cert.v.coords()).all(|(h, x)| *h >= m * x * (1.0 - rel_tol));
    Ok(Verdict { kind: "super", accepted, value: m, worst_index: Some(i), worst_violation: v })
}

/// Accepts iff `||h(x) - r x||_inf <= tol ||x||_inf`.
pub fn check_pair(spec: &OperatorSpec, cert: &EigenPairCert) -> Result<Verdict> {
    let hx = image(spec, &cert.x)?;
    let scale = cert.x.sup_norm();
    let (i, v) = worst(hx.coords().iter().zip(cert.x.coords()).map(|(h, x)| (h - cert.r * x).abs() / scale));
    Ok(Verdict { kind: "pair", accepted: v <= cert.tol, value: cert.r, worst_index: Some(i), worst_violation: v })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub within: bool,
}

/// Given `a v <= x <= b u` and accepted certificates, checks that the growth
/// rate of the orbit of `x` lies in `[mu - eps, lambda + eps]`.
#[allow(clippy::too_many_arguments)]
pub fn sandwich_growth(
    spec: &OperatorSpec,
    x: &ConeVector,
    sub: &SubEigenCert,
    sup: &SuperEigenCert,
    a: f64,
    b: f64,
    horizon: usize,
    eps: f64,
) -> Result<SandwichReport> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidArgument("sandwich constants must be positive".into()));
    }
    let n = x.dim();
    for other in [sub.u.dim(), sup.v.dim()] {
        if other != n {
            return Err(Error::DimensionMismatch { expected: n, found: other });
        }
    }
    for i in 0..n {
        let xi = x.coords()[i];
        if a * sup.v.coords()[i] > xi || xi > b * sub.u.coords()[i] {
            return Err(Error::SandwichViolated { index: i });
        }
    }
    if !check_sub(spec, sub)?.accepted {
        return Err(Error::CertificateMismatch("sub-eigenvector rejected".into()));
    }
    if !check_super(spec, sup)?.accepted {
        return Err(Error::CertificateMismatch("super-eigenvector rejected".into()));
    }
    let estimate = growth_rate(spec, x, horizon)?.rate;
    let within = sup.mu - eps <= estimate && estimate <= sub.lambda + eps;
    Ok(SandwichReport { estimate, lower: sup.mu, upper: sub.lambda, within })
}

/// Tolerance for equality of radii in the family checks.
pub const FAMILY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttainmentReport {
    pub family_radius: f64,
    /// Best Perron root over all rowwise policies.
    pub policy_max: f64,
    pub policy: Vec<usize>,
    /// Members selected row by row at the family eigenvector.
    pub witness: Vec<usize>,
    pub witness_radius: f64,
    /// Largest certified member radius, when member certificates are given.
    pub members_max: Option<f64>,
    pub attained: bool,
    pub witness_optimal: bool,
}

fn family_of(spec: &OperatorSpec, sup: bool) -> Result<&crate::operators::Family> {
    match (spec.restrict_to_cone_ref(), sup) {
        (OperatorSpec::Sup(f), true) | (OperatorSpec::Inf(f), false) => Ok(f),
        (other, _) => Err(Error::InvalidArgument(format!(
            "expected an {} family, got {}",
            if sup { "sup" } else { "inf" },
            other.kind()
        ))),
    }
}

/// Checks that the radius of a sup family is attained by a rowwise policy
/// and that the selection at the family eigenvector is such a policy.
pub fn family_attainment(spec: &OperatorSpec, family_cert: &EigenPairCert, member_certs: &[EigenPairCert]) -> Result<AttainmentReport> {
    let fam = family_of(spec, true)?;
    let spec = spec.restrict_to_cone();
    let verdict = check_pair(&spec, family_cert)?;
    if !verdict.accepted {
        return Err(Error::CertificateMismatch(format!("family eigenpair rejected: {verdict}")));
    }
    let members_max = if member_certs.is_empty() {
        None
    } else {
        if member_certs.len() != fam.members().len() {
            return Err(Error::CertificateMismatch(format!(
                "{} member certificates for {} members",
                member_certs.len(),
                fam.members().len()
            )));
        }
        let mut best = 0.0f64;
        for (k, (m, c)) in fam.members().iter().zip(member_certs).enumerate() {
            let v = check_pair(&OperatorSpec::Linear(m.clone()), c)?;
            if !v.accepted {
                return Err(Error::CertificateMismatch(format!("member {k} eigenpair rejected: {v}")));
            }
            best = best.max(c.r);
        }
        Some(best)
    };
    let opt = policy_enumeration(&spec, perron_root)?;
    let (_, witness) = spec.apply_with_selection(family_cert.x())?;
    let witness_radius = perron_root(&witness.induced(&spec)?);
    let scale = opt.value.max(1.0);
    let r = family_cert.r();
    let attained = (r - opt.value).abs() <= FAMILY_TOL * scale;
    let witness_optimal = (witness_radius - opt.value).abs() <= FAMILY_TOL * scale;
    let SelectionWitness::Members(witness) = witness else { unreachable!("sup families select members") };
    let PolicyIndex(policy) = opt.policy;
    Ok(AttainmentReport { family_radius: r, policy_max: opt.value, policy, witness, witness_radius, members_max, attained, witness_optimal })
}

/// Tolerance for the inf-family comparison.
pub const CW_INF_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CwInfReport {
    pub solved: f64,
    pub bracket: (f64, f64),
    /// Smallest Perron root over all rowwise policies.
    pub policy_min: f64,
    pub policy: Vec<usize>,
    pub members_min: f64,
    /// `M(f(u)/u)` at each sample, each an upper bound on `cw`.
    pub sample_bounds: Vec<f64>,
    pub agrees: bool,
    pub samples_consistent: bool,
    /// Whether the solved eigenvector is interior, so the infimum is attained.
    pub attained: bool,
}

/// Compares the solved Collatz-Wielandt number of an inf family with the
/// smallest policy root and with bounds sampled at interior points.
pub fn family_cw_inf(spec: &OperatorSpec, u_samples: &[ConeVector], cfg: &SolverConfig) -> Result<CwInfReport> {
    let fam = family_of(spec, false)?;
    let spec = spec.restrict_to_cone();
    let res = eigen_solve(&spec, cfg)?;
    let opt = policy_enumeration(&spec, perron_root)?;
    let members_min = fam.members().iter().map(perron_root).fold(f64::INFINITY, f64::min);
    let sample_bounds = u_samples
        .iter()
        .map(|u| cw_upper(&spec, u).map(ExtendedRatio::value))
        .collect::<Result<Vec<_>>>()?;
    let agrees = (res.radius - opt.value).abs() <= CW_INF_TOL * opt.value.max(1.0);
    let samples_consistent = sample_bounds.iter().all(|b| *b >= res.radius * (1.0 - 1e-9) - 1e-12);
    let PolicyIndex(policy) = opt.policy;
    Ok(CwInfReport {
        solved: res.radius,
        bracket: res.bracket,
        policy_min: opt.value,
        policy,
        members_min,
        sample_bounds,
        agrees,
        samples_consistent,
        attained: res.eigvec.is_interior(),
    })
}
