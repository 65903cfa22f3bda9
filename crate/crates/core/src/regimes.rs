//! Closed-form regime constants: the drift constant `M`, boundedness cases
//! (a)-(d), the bound `C0`, the b_inf thresholds of the boundedness table,
//! asymptotic band constants and the persistence conditions.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{CoeffBounds, ModelParams};

/// Relative tolerance used for the equalities `gamma = k+1`,
/// `chi2 mu2 = chi1 mu1` and `lambda1 = lambda2`.
pub const EQ_TOL: f64 = 1e-12;

pub(crate) fn approx_eq(x: f64, y: f64) -> bool {
    (x - y).abs() <= EQ_TOL * 1f64.max(x.abs()).max(y.abs())
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// `M = min{ ((s)_+ + chi2 mu2 (l1 - l2)_+) / l1, ((s)_+ + chi1 mu1 (l1 - l2)_+) / l2 }`
/// with `s = chi2 mu2 l2 - chi1 mu1 l1`.
pub fn compute_m(p: &ModelParams) -> f64 {
    let (cm1, cm2) = (p.chi_mu1(), p.chi_mu2());
    let (l1, l2) = (p.lambda1, p.lambda2);
    let s = pos(cm2 * l2 - cm1 * l1);
    let dl = pos(l1 - l2);
    ((s + cm2 * dl) / l1).min((s + cm1 * dl) / l2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::A => "A",
            Case::B => "B",
            Case::C => "C",
            Case::D => "D",
        };
        f.write_str(s)
    }
}

/// Signed slack of every inequality entering the case hypotheses; a case
/// inequality holds when its residual is positive (strict) or nonnegative
/// (non-strict), as noted per field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CaseResiduals {
    /// `gamma - (k + 1)`
    pub gamma_gap: f64,
    /// `b_inf + chi2 mu2 - chi1 mu1 - M` (strict)
    pub damping: f64,
    /// `chi2 lambda2 mu2 - chi1 lambda1 mu1` (non-strict)
    pub production_gap: f64,
    /// `lambda1 - lambda2` (non-strict)
    pub lambda_gap: f64,
    /// `b_inf - a_sup - M - chi1 mu1` (strict)
    pub case_c_gap: f64,
    /// `C_* - u0_sup` (non-strict)
    pub case_c_slack: f64,
    /// `chi2 mu2 - chi1 mu1` (equality)
    pub sensitivity_gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    /// First satisfied case in the order (a), (b), (c), (d).
    pub case: Option<Case>,
    /// Every satisfied case.
    pub satisfied: Vec<Case>,
    pub residuals: CaseResiduals,
}

/// `((b_inf - a_sup) / (M + chi1 mu1))^{1/k}`; infinite when the denominator
/// vanishes and `b_inf > a_sup`.
pub fn case_c_star(p: &ModelParams, cb: &CoeffBounds) -> f64 {
    let m = compute_m(p);
    let num = cb.b_inf - cb.a_sup;
    let den = m + p.chi_mu1();
    if num <= 0.0 {
        return 0.0;
    }
    if den == 0.0 {
        return f64::INFINITY;
    }
    (num / den).powf(1.0 / p.k)
}

fn gamma_ge(p: &ModelParams) -> bool {
    p.gamma > p.k + 1.0 || approx_eq(p.gamma, p.k + 1.0)
}

fn gamma_is_critical(p: &ModelParams) -> bool {
    approx_eq(p.gamma, p.k + 1.0)
}

fn nonneg(x: f64, scale: f64) -> bool {
    x >= -EQ_TOL * scale.max(1.0)
}

fn d_premises(p: &ModelParams) -> bool {
    approx_eq(p.chi_mu2(), p.chi_mu1()) && approx_eq(p.lambda1, p.lambda2)
}

pub fn classify(p: &ModelParams, cb: &CoeffBounds, u0_sup: f64) -> Classification {
    let m = compute_m(p);
    let (cm1, cm2) = (p.chi_mu1(), p.chi_mu2());
    let c_star = case_c_star(p, cb);
    let residuals = CaseResiduals {
        gamma_gap: p.gamma - (p.k + 1.0),
        damping: cb.b_inf + cm2 - cm1 - m,
        production_gap: cm2 * p.lambda2 - cm1 * p.lambda1,
        lambda_gap: p.lambda1 - p.lambda2,
        case_c_gap: cb.b_inf - cb.a_sup - m - cm1,
        case_c_slack: c_star - u0_sup,
        sensitivity_gap: cm2 - cm1,
    };
    let mut satisfied = Vec::new();
    // outside the coefficient hypotheses nothing applies
    if !cb.is_pure_diffusion() {
        let ge = gamma_ge(p);
        if ge && residuals.damping > 0.0 {
            satisfied.push(Case::A);
        }
        let scale = (cm2 * p.lambda2).max(cm1 * p.lambda1);
        if !ge
            && nonneg(residuals.production_gap, scale)
            && nonneg(residuals.lambda_gap, p.lambda1.max(p.lambda2))
        {
            satisfied.push(Case::B);
        }
        if !ge && residuals.case_c_gap > 0.0 && u0_sup <= c_star {
            satisfied.push(Case::C);
        }
        if !gamma_is_critical(p) && d_premises(p) {
            satisfied.push(Case::D);
        }
    }
    Classification {
        case: satisfied.first().copied(),
        satisfied,
        residuals,
    }
}

/// The bound `C0` for a given case. `case = None` is admitted only for the
/// chemotaxis-free pure diffusion, where `C0 = u0_sup`.
pub fn compute_c0(p: &ModelParams, cb: &CoeffBounds, u0_sup: f64, case: Option<Case>) -> Result<f64> {
    let floor = 1f64.max(u0_sup);
    match case {
        None if cb.is_pure_diffusion() && p.is_chemotaxis_free() => Ok(u0_sup),
        None => Err(Error::NoCase),
        Some(Case::A) => {
            let den = cb.b_inf + p.chi_mu2() - p.chi_mu1() - compute_m(p);
            Ok(floor.max((cb.a_sup / den).powf(1.0 / p.k)))
        }
        Some(Case::B) | Some(Case::D) => Ok(floor.max((cb.a_sup / cb.b_inf).powf(1.0 / (p.gamma - 1.0)))),
        Some(Case::C) => {
            let c_star = case_c_star(p, cb);
            if u0_sup > c_star {
                return Err(Error::CaseCHypothesisViolated { u0_sup, c_star });
            }
            // unbounded admissible C_* when M + chi1 mu1 = 0: use the floor
            let c_star = if c_star.is_finite() { c_star } else { 1.0 };
            Ok(floor.max(c_star))
        }
    }
}

/// Table column: (a) for `gamma >= k+1`, (c) otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableColumn {
    A,
    C,
}

impl fmt::Display for TableColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableColumn::A => "A",
            TableColumn::C => "C",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Table1Cell {
    pub row: u8,
    pub column: TableColumn,
    /// Boundedness requires `b_inf > threshold`.
    pub threshold: f64,
}

/// Row by the signs of `chi2 lambda2 mu2 - chi1 lambda1 mu1` and
/// `lambda1 - lambda2` (ties to the earlier row); threshold from the
/// row's closed form.
pub fn table1_threshold(p: &ModelParams, cb: &CoeffBounds) -> Table1Cell {
    let (cm1, cm2) = (p.chi_mu1(), p.chi_mu2());
    let (l1, l2) = (p.lambda1, p.lambda2);
    let s_nonneg = cm2 * l2 >= cm1 * l1;
    let l_nonneg = l1 >= l2;
    let row = match (s_nonneg, l_nonneg) {
        (true, true) => 1,
        (true, false) => 2,
        (false, true) => 3,
        (false, false) => 4,
    };
    let column = if gamma_ge(p) { TableColumn::A } else { TableColumn::C };
    let threshold = match (row, column) {
        (1, TableColumn::A) => 0.0,
        (1, TableColumn::C) => cb.a_sup + cm2,
        (2, TableColumn::A) => cm1 * (1.0 - l1 / l2),
        (2, TableColumn::C) => cb.a_sup + cm1 * (1.0 - l1 / l2) + cm2,
        (3, TableColumn::A) => cm1 - cm2 * l2 / l1,
        (3, TableColumn::C) => cb.a_sup + cm2 * (1.0 - l2 / l1) + cm1,
        (_, TableColumn::A) => cm1 - cm2,
        (_, TableColumn::C) => cb.a_sup + cm1,
    };
    Table1Cell {
        row,
        column,
        threshold,
    }
}

/// Threshold on `b_inf` stated directly by the case (a) / case (c)
/// inequality: `chi1 mu1 - chi2 mu2 + M` or `a_sup + M + chi1 mu1`.
pub fn theorem_threshold(p: &ModelParams, cb: &CoeffBounds) -> f64 {
    let m = compute_m(p);
    if gamma_ge(p) {
        p.chi_mu1() - p.chi_mu2() + m
    } else {
        cb.a_sup + m + p.chi_mu1()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Band {
    /// Upper bound on `limsup sup u`.
    pub mplus: f64,
    /// Lower bound on `limsup sup u`.
    pub lower_limsup: f64,
    /// Upper bound on `liminf inf u`.
    pub upper_liminf: f64,
}

/// Band constants; requires `gamma = k+1` with a positive damping residual,
/// or `gamma != k+1` with `chi2 mu2 = chi1 mu1`, `lambda1 = lambda2`.
pub fn asymptotic_band(p: &ModelParams, cb: &CoeffBounds, c0: f64) -> Result<Band> {
    let m = compute_m(p);
    let (cm1, cm2) = (p.chi_mu1(), p.chi_mu2());
    if cb.is_pure_diffusion() {
        return Err(Error::BandHypothesesUnmet);
    }
    if gamma_is_critical(p) {
        let damping = cb.b_inf + cm2 - cm1 - m;
        if !(damping > 0.0) {
            return Err(Error::BandHypothesesUnmet);
        }
        let inv_k = 1.0 / p.k;
        let mut upper = ((cb.a_sup + m * c0.powf(p.k)) / (cb.b_inf + cm2 - cm1)).powf(inv_k);
        if cm2 >= cm1 {
            upper = upper.min(((cb.a_sup + m * c0.powf(p.k)) / cb.b_inf).powf(inv_k));
        }
        Ok(Band {
            mplus: (cb.a_sup / damping).powf(inv_k),
            lower_limsup: (cb.a_inf / (cb.b_sup + cm2)).powf(inv_k),
            upper_liminf: upper,
        })
    } else if d_premises(p) {
        let e = 1.0 / (p.gamma - 1.0);
        Ok(Band {
            mplus: (cb.a_sup / cb.b_inf).powf(e),
            lower_limsup: (cb.a_inf / cb.b_sup).powf(e),
            upper_liminf: (cb.a_sup / cb.b_inf).powf(e),
        })
    } else {
        Err(Error::BandHypothesesUnmet)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Persistence {
    pub pointwise: bool,
    pub uniform: bool,
    pub m_tilde: Option<f64>,
}

/// Pointwise and uniform persistence conditions with the explicit uniform
/// lower bound `m_tilde`.
///
/// Uniform persistence is reported only when the pointwise hypothesis of the
/// same branch holds and the numerator of `m_tilde` is positive. In the
/// critical branch this means `b_inf > (1 + a_sup/a_inf) chi1 mu1 - chi2 mu2 + M`.
pub fn persistence_check(p: &ModelParams, cb: &CoeffBounds) -> Persistence {
    let none = Persistence {
        pointwise: false,
        uniform: false,
        m_tilde: None,
    };
    if cb.is_pure_diffusion() {
        return none;
    }
    let m = compute_m(p);
    let (cm1, cm2) = (p.chi_mu1(), p.chi_mu2());
    if gamma_is_critical(p) {
        let damping = cb.b_inf - cm1 + cm2 - m;
        if !(damping > 0.0) {
            return none;
        }
        let num = cb.a_inf - cm1 * cb.a_sup / damping;
        let den = cb.b_sup - cm1 + cm2;
        if num > 0.0 && den > 0.0 {
            Persistence {
                pointwise: true,
                uniform: true,
                m_tilde: Some((num / den).powf(1.0 / p.k)),
            }
        } else {
            Persistence { pointwise: true, ..none }
        }
    } else if d_premises(p) {
        let num = cb.a_inf - cm1 * (cb.a_sup / cb.b_inf).powf(p.k / (p.gamma - 1.0));
        if num > 0.0 {
            Persistence {
                pointwise: true,
                uniform: true,
                m_tilde: Some((num / cb.b_sup).powf(1.0 / (p.gamma - 1.0))),
            }
        } else {
            Persistence { pointwise: true, ..none }
        }
    } else {
        none
    }
}

/// Every derived constant for one parameter tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct RegimeReport {
    pub params: ModelParams,
    pub bounds: CoeffBounds,
    pub u0_sup: f64,
    pub m: f64,
    pub classification: Classification,
    pub pure_diffusion: bool,
    pub c0: Option<f64>,
    pub band: Option<Band>,
    pub persistence: Persistence,
    pub table1: Table1Cell,
}

impl RegimeReport {
    pub fn case(&self) -> Option<Case> {
        self.classification.case
    }

    /// True when the boundedness result applies (some case, or pure diffusion).
    pub fn is_covered(&self) -> bool {
        self.c0.is_some()
    }

    pub fn csv_header() -> &'static str {
        "alpha,gamma,k,chi1,chi2,lambda1,lambda2,mu1,mu2,dim,a_inf,a_sup,b_inf,b_sup,u0_sup,\
M,case,C0,Mplus,lower_limsup,upper_liminf,pointwise,uniform,m_tilde,table1_row,table1_threshold"
    }

    pub fn csv_row(&self) -> String {
        let p = &self.params;
        let b = &self.bounds;
        let opt = |x: Option<f64>| x.map(|v| format!("{v}")).unwrap_or_else(|| "NA".into());
        let case = match (self.case(), self.pure_diffusion) {
            (Some(c), _) => c.to_string(),
            (None, true) => "PureDiffusion".into(),
            (None, false) => "None".into(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            p.alpha,
            p.gamma,
            p.k,
            p.chi1,
            p.chi2,
            p.lambda1,
            p.lambda2,
            p.mu1,
            p.mu2,
            p.dim,
            b.a_inf,
            b.a_sup,
            b.b_inf,
            b.b_sup,
            self.u0_sup,
            self.m,
            case,
            opt(self.c0),
            opt(self.band.map(|x| x.mplus)),
            opt(self.band.map(|x| x.lower_limsup)),
            opt(self.band.map(|x| x.upper_liminf)),
            self.persistence.pointwise,
            self.persistence.uniform,
            opt(self.persistence.m_tilde),
            self.table1.row,
            self.table1.threshold
        )
    }
}

impl fmt::Display for RegimeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.classification;
        let case = match (c.case, self.pure_diffusion) {
            (Some(x), _) => x.to_string(),
            (None, true) => "PureDiffusion".into(),
            (None, false) => "None".into(),
        };
        let satisfied: Vec<String> = c.satisfied.iter().map(|x| x.to_string()).collect();
        writeln!(f, "case = {case}")?;
        writeln!(f, "satisfied = [{}]", satisfied.join(","))?;
        writeln!(f, "M = {}", self.m)?;
        match self.c0 {
            Some(v) => writeln!(f, "C0 = {v}")?,
            None => writeln!(f, "C0 = NA")?,
        }
        match self.band {
            Some(b) => writeln!(
                f,
                "Mplus = {}\nlower_limsup = {}\nupper_liminf = {}",
                b.mplus, b.lower_limsup, b.upper_liminf
            )?,
            None => writeln!(f, "band = NA")?,
        }
        writeln!(
            f,
            "pointwise_persistence = {}\nuniform_persistence = {}",
            self.persistence.pointwise, self.persistence.uniform
        )?;
        match self.persistence.m_tilde {
            Some(v) => writeln!(f, "m_tilde = {v}")?,
            None => writeln!(f, "m_tilde = NA")?,
        }
        writeln!(
            f,
            "table1 = row {} column {} threshold b_inf > {}",
            self.table1.row, self.table1.column, self.table1.threshold
        )?;
        let r = &c.residuals;
        write!(
            f,
            "residuals: gamma-(k+1) = {}, damping = {}, production_gap = {}, lambda_gap = {}, case_c_gap = {}, case_c_slack = {}, sensitivity_gap = {}",
            r.gamma_gap, r.damping, r.production_gap, r.lambda_gap, r.case_c_gap, r.case_c_slack, r.sensitivity_gap
        )
    }
}

pub fn regime_report(p: &ModelParams, cb: &CoeffBounds, u0_sup: f64) -> RegimeReport {
    let classification = classify(p, cb, u0_sup);
    let pure_diffusion = cb.is_pure_diffusion() && p.is_chemotaxis_free();
    let c0 = compute_c0(p, cb, u0_sup, classification.case).ok();
    let band = c0.and_then(|c| asymptotic_band(p, cb, c).ok());
    RegimeReport {
        params: *p,
        bounds: *cb,
        u0_sup,
        m: compute_m(p),
        classification,
        pure_diffusion,
        c0,
        band,
        persistence: persistence_check(p, cb),
        table1: table1_threshold(p, cb),
    }
}

/// Reference level for blow-up detection: `C0` when some case holds,
/// otherwise `max(1, u0_sup, (a_sup/b_inf)^{1/(gamma-1)})`.
pub fn c0_candidate(p: &ModelParams, cb: &CoeffBounds, u0_sup: f64) -> f64 {
    let case = classify(p, cb, u0_sup).case;
    if let Ok(c0) = compute_c0(p, cb, u0_sup, case) {
        return c0;
    }
    let mut c = 1f64.max(u0_sup);
    if cb.b_inf > 0.0 {
        c = c.max((cb.a_sup / cb.b_inf).powf(1.0 / (p.gamma - 1.0)));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[allow(clippy::too_many_arguments)]
    fn params(chi1: f64, mu1: f64, l1: f64, chi2: f64, mu2: f64, l2: f64, gamma: f64, k: f64) -> ModelParams {
        ModelParams {
            alpha: 0.75,
            gamma,
            k,
            chi1,
            chi2,
            lambda1: l1,
            lambda2: l2,
            mu1,
            mu2,
            dim: 1,
        }
    }

    fn bounds(a_inf: f64, a_sup: f64, b_inf: f64, b_sup: f64) -> CoeffBounds {
        CoeffBounds::new(a_inf, a_sup, b_inf, b_sup).unwrap()
    }

    #[test]
    fn m_examples() {
        assert_eq!(compute_m(&params(1.0, 2.0, 1.5, 2.0, 1.0, 1.5, 2.0, 1.0)), 0.0);
        let p = params(0.5, 1.0, 2.0, 1.0, 1.5, 1.0, 2.0, 2.0);
        assert!((compute_m(&p) - (1.5 - 0.5)).abs() < 1e-15);
        assert_eq!(compute_m(&params(1.0, 1.0, 2.0, 2.0, 1.0, 1.0, 2.0, 1.0)), 1.0);
    }

    #[test]
    fn case_a_example() {
        let p = params(0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0, 2.0);
        let c = classify(&p, &bounds(1.0, 1.0, 1.0, 1.0), 1.0);
        assert_eq!(c.case, Some(Case::A));
        assert!((c.residuals.damping - 1.0).abs() < 1e-15);
    }

    #[test]
    fn first_match_over_d() {
        let p = params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0);
        let c = classify(&p, &bounds(1.0, 1.0, 1.0, 1.0), 1.0);
        assert_eq!(c.case, Some(Case::B));
        assert!(c.satisfied.contains(&Case::D));
    }

    #[test]
    fn c0_examples() {
        let p = params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0, 2.0);
        let c0 = compute_c0(&p, &bounds(1.0, 1.0, 2.0, 2.0), 0.5, Some(Case::A)).unwrap();
        assert_eq!(c0, 1.0);
        let p = params(0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 2.0, 1.0);
        assert_eq!(compute_c0(&p, &CoeffBounds::pure_diffusion(), 0.3, None).unwrap(), 0.3);
        let pb = params(0.5, 1.0, 2.0, 1.5, 1.0, 1.0, 2.0, 2.0);
        assert_eq!(compute_c0(&pb, &bounds(2.0, 2.0, 2.0, 2.0), 1.7, Some(Case::B)).unwrap(), 1.7);
    }

    #[test]
    fn case_c_violation() {
        let p = params(1.0, 1.0, 1.0, 0.2, 1.0, 1.0, 2.0, 2.0);
        let cb = bounds(1.0, 1.0, 3.2, 3.8);
        let c_star = case_c_star(&p, &cb);
        assert!((c_star - 2.2f64.sqrt()).abs() < 1e-14);
        assert_eq!(classify(&p, &cb, 1.0).case, Some(Case::C));
        assert_eq!(classify(&p, &cb, 2.0).case, None);
        assert!(matches!(
            compute_c0(&p, &cb, 2.0, Some(Case::C)),
            Err(Error::CaseCHypothesisViolated { .. })
        ));
    }

    #[test]
    fn table_rows() {
        let cb = bounds(1.0, 1.5, 2.0, 2.0);
        let t = table1_threshold(&params(0.5, 1.0, 2.0, 1.0, 1.0, 1.0, 3.0, 2.0), &cb);
        assert_eq!((t.row, t.column, t.threshold), (1, TableColumn::A, 0.0));
        let t = table1_threshold(&params(0.5, 1.0, 2.0, 1.0, 1.0, 1.0, 2.0, 2.0), &cb);
        assert_eq!((t.row, t.column, t.threshold), (1, TableColumn::C, 2.5));
        let t = table1_threshold(&params(2.0, 1.0, 1.0, 0.5, 1.0, 3.0, 3.0, 2.0), &cb);
        assert_eq!((t.row, t.threshold), (4, 1.5));
    }

    #[test]
    fn band_examples() {
        let p = params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0, 2.0);
        let b = asymptotic_band(&p, &bounds(1.0, 1.0, 2.0, 2.0), 1.0).unwrap();
        assert!((b.mplus - 0.5f64.sqrt()).abs() < 1e-15);
        let p = params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.5, 2.0);
        let b = asymptotic_band(&p, &bounds(1.0, 1.0, 2.0, 2.0), 1.0).unwrap();
        assert!((b.mplus - 0.5f64.powf(1.0 / 1.5)).abs() < 1e-15);
        let p = params(0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 2.0, 1.0);
        let b = asymptotic_band(&p, &bounds(1.3, 1.3, 1.3, 1.3), 1.0).unwrap();
        assert_eq!((b.mplus, b.lower_limsup, b.upper_liminf), (1.0, 1.0, 1.0));
        let p = params(1.0, 1.0, 1.0, 0.5, 1.0, 1.0, 2.5, 2.0);
        assert_eq!(
            asymptotic_band(&p, &bounds(1.0, 1.0, 2.0, 2.0), 1.0),
            Err(Error::BandHypothesesUnmet)
        );
    }

    #[test]
    fn persistence_without_attraction() {
        let cb = bounds(0.7, 1.3, 0.9, 1.1);
        let p = params(0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0);
        let r = persistence_check(&p, &cb);
        assert!(r.pointwise && r.uniform);
        assert!((r.m_tilde.unwrap() - 0.7 / 2.1).abs() < 1e-15);
        let p = params(0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 3.0, 1.0);
        let r = persistence_check(&p, &cb);
        assert!((r.m_tilde.unwrap() - (0.7f64 / 1.1).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn report_row_has_every_column() {
        let p = params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0);
        let r = regime_report(&p, &bounds(1.0, 1.0, 1.0, 1.0), 1.0);
        let n_header = RegimeReport::csv_header().split(',').count();
        assert_eq!(r.csv_row().split(',').count(), n_header);
        assert!(r.to_string().contains("case = B"));
    }
}
