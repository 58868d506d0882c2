//! Continuous, positively homogeneous, order-preserving maps of the orthant.
//!
//! Every variant of [`OperatorSpec`] is built from nonnegative data, so
//! order preservation and degree-one homogeneity hold by construction.
//! Families are rowwise: the value of row `i` is the max (or min) over
//! members of row `i` of the member's image, which guarantees a pointwise
//! selection exists (a single member-row composite attaining the value).

mod json;

use crate::cone::{sup_norm, ConeVector, Gauge, SliceConfig};
use crate::error::{Error, Result};

/// Square matrix with nonnegative finite entries, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct NonnegMatrix {
    n: usize,
    data: Vec<f64>,
}

impl NonnegMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidOperator("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidOperator(format!("row {i} has length {}, expected {n}", row.len())));
            }
            for (j, v) in row.into_iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidOperator(format!("entry ({i},{j}) = {v} is not a finite nonnegative number")));
                }
                data.push(v);
            }
        }
        Ok(Self { n, data })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d.max(0.0);
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(self.rows().into_iter().map(|r| r.into_iter().map(|v| v * t).collect()).collect())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Self { n, data }
    }

    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), x);
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.mul_vec_into(x, &mut out);
        out
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Finite nonempty family of same-size nonnegative matrices combined rowwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    members: Vec<NonnegMatrix>,
}

impl Family {
    pub fn new(members: Vec<NonnegMatrix>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::InvalidOperator("empty family".into()))?;
        let n = first.dim();
        if let Some(m) = members.iter().find(|m| m.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: m.dim() });
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[NonnegMatrix] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    /// Number of rowwise policies `|A|^n`, as a float to survive overflow.
    pub fn policy_count(&self) -> f64 {
        (self.members.len() as f64).powi(self.dim() as i32)
    }

    /// The member-row composite whose row `i` is row `i` of member `policy[i]`.
    pub fn policy_matrix(&self, policy: &[usize]) -> Result<NonnegMatrix> {
        if policy.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: policy.len() });
        }
        let mut rows = Vec::with_capacity(self.dim());
        for (i, &a) in policy.iter().enumerate() {
            let member = self
                .members
                .get(a)
                .ok_or_else(|| Error::InvalidArgument(format!("policy selects member {a} of {}", self.members.len())))?;
            rows.push(member.row(i).to_vec());
        }
        NonnegMatrix::new(rows)
    }
}

/// One max-min layer: `h(x)_i = max_a min_b <rows[i][a][b], x>`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinMaxRows {
    n: usize,
    rows: Vec<Vec<Vec<Vec<f64>>>>,
}

impl MinMaxRows {
    pub fn new(rows: Vec<Vec<Vec<Vec<f64>>>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidOperator("minmax operator without rows".into()));
        }
        for (i, actions) in rows.iter().enumerate() {
            if actions.is_empty() {
                return Err(Error::InvalidOperator(format!("row {i} has no actions")));
            }
            for (a, replies) in actions.iter().enumerate() {
                if replies.is_empty() {
                    return Err(Error::InvalidOperator(format!("row {i} action {a} has no opponent choices")));
                }
                for v in replies {
                    if v.len() != n {
                        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
                    }
                    if v.iter().any(|c| !c.is_finite() || *c < 0.0) {
                        return Err(Error::InvalidOperator(format!("row {i} action {a} has a negative or non-finite entry")));
                    }
                }
            }
        }
        Ok(Self { n, rows })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Vec<Vec<f64>>>] {
        &self.rows
    }

    /// Row `i` value with lowest-index (action, reply) attaining it.
    fn row_value(&self, i: usize, x: &[f64]) -> (f64, usize, usize) {
        let mut best = (f64::NEG_INFINITY, 0, 0);
        for (a, replies) in self.rows[i].iter().enumerate() {
            let mut worst = (f64::INFINITY, 0);
            for (b, v) in replies.iter().enumerate() {
                let val = dot(v, x);
                if val < worst.0 {
                    worst = (val, b);
                }
            }
            if worst.0 > best.0 {
                best = (worst.0, a, worst.1);
            }
        }
        best
    }
}

/// Multiplicative form of a max-plus matrix: `h(x)_i = max_j e^{w_ij} x_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxPlusMatrix {
    n: usize,
    weights: Vec<f64>,
    factors: Vec<f64>,
}

impl MaxPlusMatrix {
    /// `weights` may contain `f64::NEG_INFINITY`; each row needs a finite entry.
    pub fn new(weights: Vec<Vec<f64>>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidOperator("empty max-plus matrix".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in weights.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidOperator(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if row.iter().any(|w| w.is_nan() || *w == f64::INFINITY) {
                return Err(Error::InvalidOperator(format!("row {i} contains NaN or +inf")));
            }
            if !row.iter().any(|w| w.is_finite()) {
                return Err(Error::InvalidOperator(format!("row {i} has no finite weight")));
            }
            flat.extend(row);
        }
        let factors: Vec<f64> = flat.iter().map(|w| w.exp()).collect();
        if factors.iter().any(|f| f.is_infinite()) {
            return Err(Error::InvalidOperator("weight too large to exponentiate".into()));
        }
        Ok(Self { n, weights: flat, factors })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn weights(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.weights[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.factors[i * self.n..(i + 1) * self.n];
            *o = row.iter().zip(x).map(|(f, v)| f * v).fold(0.0, f64::max);
        }
    }
}

/// `h_s(x) = h(x) + s q(h(x)) u`.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbed {
    base: Box<OperatorSpec>,
    s: f64,
    slice: SliceConfig,
}

impl Perturbed {
    pub fn new(base: OperatorSpec, s: f64, slice: SliceConfig) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidOperator(format!("perturbation size must be positive, got {s}")));
        }
        if slice.dim() != base.dim() {
            return Err(Error::DimensionMismatch { expected: base.dim(), found: slice.dim() });
        }
        Ok(Self { base: Box::new(base), s, slice })
    }

    pub fn base(&self) -> &OperatorSpec {
        &self.base
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn slice(&self) -> &SliceConfig {
        &self.slice
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Power {
    base: Box<OperatorSpec>,
    m: usize,
}

impl Power {
    pub fn new(base: OperatorSpec, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidOperator("power exponent must be positive".into()));
        }
        Ok(Self { base: Box::new(base), m })
    }

    pub fn base(&self) -> &OperatorSpec {
        &self.base
    }

    pub fn exponent(&self) -> usize {
        self.m
    }
}

/// Extension of a linear or rowwise-family map to all of `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct WholeSpace {
    base: Box<OperatorSpec>,
}

impl WholeSpace {
    pub fn new(base: OperatorSpec) -> Result<Self> {
        match base {
            OperatorSpec::Linear(_) | OperatorSpec::Sup(_) | OperatorSpec::Inf(_) => Ok(Self { base: Box::new(base) }),
            _ => Err(Error::InvalidOperator("whole-space extension needs a linear, sup or inf base".into())),
        }
    }

    pub fn base(&self) -> &OperatorSpec {
        &self.base
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorSpec {
    Linear(NonnegMatrix),
    Sup(Family),
    Inf(Family),
    MinMax(MinMaxRows),
    MaxPlus(MaxPlusMatrix),
    Perturbed(Perturbed),
    Power(Power),
    WholeSpace(WholeSpace),
}

/// Per-row choices that turn a family map into a single nonnegative matrix
/// at a given point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelectionWitness {
    /// Chosen member index for each row of a sup or inf family.
    Members(Vec<usize>),
    /// Chosen (action, opponent reply) for each row of a min-max operator.
    Actions(Vec<(usize, usize)>),
}

impl SelectionWitness {
    /// The linear map induced by the witness.
    pub fn induced(&self, spec: &OperatorSpec) -> Result<NonnegMatrix> {
        match (self, spec) {
            (SelectionWitness::Members(p), OperatorSpec::Sup(f) | OperatorSpec::Inf(f)) => f.policy_matrix(p),
            (SelectionWitness::Actions(choices), OperatorSpec::MinMax(g)) => {
                if choices.len() != g.dim() {
                    return Err(Error::DimensionMismatch { expected: g.dim(), found: choices.len() });
                }
                let rows = choices
                    .iter()
                    .enumerate()
                    .map(|(i, &(a, b))| {
                        g.rows[i]
                            .get(a)
                            .and_then(|r| r.get(b))
                            .cloned()
                            .ok_or_else(|| Error::InvalidArgument(format!("row {i}: no action {a} / reply {b}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                NonnegMatrix::new(rows)
            }
            _ => Err(Error::InvalidArgument("witness does not match the operator kind".into())),
        }
    }

    pub fn as_policy(&self) -> Option<&[usize]> {
        match self {
            SelectionWitness::Members(p) => Some(p),
            SelectionWitness::Actions(_) => None,
        }
    }
}

impl OperatorSpec {
    pub fn linear(rows: Vec<Vec<f64>>) -> Result<Self> {
        Ok(OperatorSpec::Linear(NonnegMatrix::new(rows)?))
    }

    pub fn sup(members: Vec<NonnegMatrix>) -> Result<Self> {
        Ok(OperatorSpec::Sup(Family::new(members)?))
    }

    pub fn inf(members: Vec<NonnegMatrix>) -> Result<Self> {
        Ok(OperatorSpec::Inf(Family::new(members)?))
    }

    pub fn minmax(rows: Vec<Vec<Vec<Vec<f64>>>>) -> Result<Self> {
        Ok(OperatorSpec::MinMax(MinMaxRows::new(rows)?))
    }

    pub fn maxplus(weights: Vec<Vec<f64>>) -> Result<Self> {
        Ok(OperatorSpec::MaxPlus(MaxPlusMatrix::new(weights)?))
    }

    pub fn perturbed(base: OperatorSpec, s: f64, slice: SliceConfig) -> Result<Self> {
        Ok(OperatorSpec::Perturbed(Perturbed::new(base, s, slice)?))
    }

    pub fn power(base: OperatorSpec, m: usize) -> Result<Self> {
        Ok(OperatorSpec::Power(Power::new(base, m)?))
    }

    pub fn whole_space(base: OperatorSpec) -> Result<Self> {
        Ok(OperatorSpec::WholeSpace(WholeSpace::new(base)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            OperatorSpec::Linear(a) => a.dim(),
            OperatorSpec::Sup(f) | OperatorSpec::Inf(f) => f.dim(),
            OperatorSpec::MinMax(g) => g.dim(),
            OperatorSpec::MaxPlus(w) => w.dim(),
            OperatorSpec::Perturbed(p) => p.base.dim(),
            OperatorSpec::Power(p) => p.base.dim(),
            OperatorSpec::WholeSpace(w) => w.base.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            OperatorSpec::Linear(_) => "linear",
            OperatorSpec::Sup(_) => "sup",
            OperatorSpec::Inf(_) => "inf",
            OperatorSpec::MinMax(_) => "minmax",
            OperatorSpec::MaxPlus(_) => "maxplus",
            OperatorSpec::Perturbed(_) => "perturbed",
            OperatorSpec::Power(_) => "power",
            OperatorSpec::WholeSpace(_) => "wholespace",
        }
    }

    /// Raw evaluation `out = h(x)` without domain checks. `x` and `out`
    /// must both have length `dim()`. For cone-domain variants `x` must be
    /// nonnegative; `WholeSpace` accepts any real vector.
    pub fn evaluate(&self, x: &[f64], out: &mut [f64]) {
        match self {
            OperatorSpec::Linear(a) => a.mul_vec_into(x, out),
            OperatorSpec::Sup(f) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = f.members.iter().map(|m| dot(m.row(i), x)).fold(f64::NEG_INFINITY, f64::max);
                }
            }
            OperatorSpec::Inf(f) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = f.members.iter().map(|m| dot(m.row(i), x)).fold(f64::INFINITY, f64::min);
                }
            }
            OperatorSpec::MinMax(g) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = g.row_value(i, x).0;
                }
            }
            OperatorSpec::MaxPlus(w) => w.eval_into(x, out),
            OperatorSpec::Perturbed(p) => {
                p.base.evaluate(x, out);
                let shift = p.s * p.slice.q(out);
                for (o, u) in out.iter_mut().zip(p.slice.unit().coords()) {
                    *o += shift * u;
                }
            }
            OperatorSpec::Power(p) => {
                let mut cur = x.to_vec();
                for _ in 0..p.m {
                    p.base.evaluate(&cur, out);
                    cur.copy_from_slice(out);
                }
            }
            OperatorSpec::WholeSpace(w) => w.base.evaluate(x, out),
        }
    }

    /// Applies the map to a cone point.
    pub fn apply(&self, x: &ConeVector) -> Result<ConeVector> {
        self.check_dim(x.dim())?;
        let mut out = vec![0.0; self.dim()];
        self.evaluate(x.coords(), &mut out);
        ConeVector::new(out)
    }

    /// Applies a whole-space operator to an arbitrary real vector.
    pub fn apply_whole(&self, x: &[f64]) -> Result<Vec<f64>> {
        if !matches!(self, OperatorSpec::WholeSpace(_)) {
            return Err(Error::InvalidArgument(format!("{} operator is only defined on the cone", self.kind())));
        }
        self.check_dim(x.len())?;
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index, value: x[index] });
        }
        let mut out = vec![0.0; self.dim()];
        self.evaluate(x, &mut out);
        Ok(out)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found });
        }
        Ok(())
    }

    /// Value of a sup, inf or min-max operator together with the per-row
    /// choices attaining it (lowest index on ties).
    pub fn apply_with_selection(&self, x: &ConeVector) -> Result<(ConeVector, SelectionWitness)> {
        self.check_dim(x.dim())?;
        let xs = x.coords();
        let n = self.dim();
        match self {
            OperatorSpec::Sup(f) | OperatorSpec::Inf(f) => {
                let is_sup = matches!(self, OperatorSpec::Sup(_));
                let mut value = vec![0.0; n];
                let mut policy = vec![0; n];
                for i in 0..n {
                    let mut best = dot(f.members[0].row(i), xs);
                    let mut arg = 0;
                    for (a, m) in f.members.iter().enumerate().skip(1) {
                        let v = dot(m.row(i), xs);
                        if (is_sup && v > best) || (!is_sup && v < best) {
                            best = v;
                            arg = a;
                        }
                    }
                    value[i] = best;
                    policy[i] = arg;
                }
                Ok((ConeVector::new(value)?, SelectionWitness::Members(policy)))
            }
            OperatorSpec::MinMax(g) => {
                let mut value = vec![0.0; n];
                let mut choices = Vec::with_capacity(n);
                for (i, v) in value.iter_mut().enumerate() {
                    let (val, a, b) = g.row_value(i, xs);
                    *v = val;
                    choices.push((a, b));
                }
                Ok((ConeVector::new(value)?, SelectionWitness::Actions(choices)))
            }
            _ => Err(Error::InvalidArgument(format!("{} operator has no selection", self.kind()))),
        }
    }

    /// For a whole-space map `h`, the cone map `g(y) = -h(-y)`.
    pub fn restrict_to_negative_cone(&self) -> Result<OperatorSpec> {
        let OperatorSpec::WholeSpace(w) = self else {
            return Err(Error::InvalidArgument("negative-cone restriction needs a whole-space operator".into()));
        };
        Ok(match w.base.as_ref() {
            OperatorSpec::Linear(a) => OperatorSpec::Linear(a.clone()),
            OperatorSpec::Sup(f) => OperatorSpec::Inf(f.clone()),
            OperatorSpec::Inf(f) => OperatorSpec::Sup(f.clone()),
            _ => unreachable!("WholeSpace::new admits only linear, sup and inf bases"),
        })
    }

    /// The same map viewed on the cone (identity for cone-domain variants).
    pub fn restrict_to_cone(&self) -> OperatorSpec {
        match self {
            OperatorSpec::WholeSpace(w) => w.base.as_ref().clone(),
            other => other.clone(),
        }
    }

    pub(crate) fn restrict_to_cone_ref(&self) -> &OperatorSpec {
        match self {
            OperatorSpec::WholeSpace(w) => w.base.as_ref(),
            other => other,
        }
    }

    /// `||h||_C` in the sup norm, equal to `||h(1)||_inf` for every
    /// order-preserving homogeneous map of the orthant.
    pub fn operator_norm_on_cone(&self) -> f64 {
        let n = self.dim();
        let mut out = vec![0.0; n];
        self.evaluate(&vec![1.0; n], &mut out);
        sup_norm(&out)
    }

    /// The perturbed operator `h_s` for this base.
    pub fn regularized(&self, s: f64, slice: &SliceConfig) -> Result<OperatorSpec> {
        OperatorSpec::perturbed(self.restrict_to_cone(), s, slice.clone())
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        json::parse_operator(value)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::InvalidOperator(format!("malformed JSON: {e}")))?;
        json::parse_operator(&value)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::operator_to_json(self)
    }
}

/// The default sup-norm gauge used by the perturbation in JSON input.
pub(crate) fn default_gauge() -> Gauge {
    Gauge::Unorm
}
