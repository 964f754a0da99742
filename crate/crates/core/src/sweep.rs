//! Phase-diagram grids, photon-number curves, threshold bisection, and the
//! CSV/SVG artifacts built from them.
//!
//! Grid points are independent work items: [`grid_sweep`] evaluates them in
//! parallel and gathers results in index order, so output is deterministic
//! and independent of worker count.

use std::collections::BTreeSet;
use std::path::Path;

use rayon::prelude::*;

use crate::error::Error;
use crate::model::ModelParams;
use crate::stability::{
    classify, jacobian_normal, jacobian_superradiant, Classification, PhaseLabel, StabilityReport,
};
use crate::steady_state::{superradiant_branches, Branches};
use crate::textio::{format_float, write_text};

/// Bisection width at which a threshold scan stops.
pub const BISECTION_TOL: f64 = 1e-4;

/// Which model parameter a sweep axis or threshold scan varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamAxis {
    /// Cavity frequency ω_c.
    OmegaC,
    /// Qubit splitting ω_0.
    Omega0,
    /// Two-photon coupling g.
    G,
    /// Cavity decay κ.
    Kappa,
    /// Qubit decay Γ↓.
    GammaDown,
    /// Qubit dephasing Γφ.
    GammaPhi,
    /// The locked pair Γ↓ = Γφ = Γ.
    GammaPair,
}

impl ParamAxis {
    /// Parses a parameter name. `"gamma"` means the locked pair.
    pub fn from_name(name: &str) -> Result<Self, Error> {
        match name {
            "omega_c" => Ok(ParamAxis::OmegaC),
            "omega_0" => Ok(ParamAxis::Omega0),
            "g" => Ok(ParamAxis::G),
            "kappa" => Ok(ParamAxis::Kappa),
            "gamma_down" => Ok(ParamAxis::GammaDown),
            "gamma_phi" => Ok(ParamAxis::GammaPhi),
            "gamma" => Ok(ParamAxis::GammaPair),
            other => Err(Error::UnknownAxis(other.to_string())),
        }
    }

    /// Canonical name (inverse of [`ParamAxis::from_name`]).
    pub fn name(&self) -> &'static str {
        match self {
            ParamAxis::OmegaC => "omega_c",
            ParamAxis::Omega0 => "omega_0",
            ParamAxis::G => "g",
            ParamAxis::Kappa => "kappa",
            ParamAxis::GammaDown => "gamma_down",
            ParamAxis::GammaPhi => "gamma_phi",
            ParamAxis::GammaPair => "gamma",
        }
    }

    /// Returns `base` with this parameter set to `value`.
    pub fn apply(&self, base: &ModelParams, value: f64) -> ModelParams {
        let mut p = *base;
        match self {
            ParamAxis::OmegaC => p.omega_c = value,
            ParamAxis::Omega0 => p.omega_0 = value,
            ParamAxis::G => p.g = value,
            ParamAxis::Kappa => p.kappa = value,
            ParamAxis::GammaDown => p.gamma_down = value,
            ParamAxis::GammaPhi => p.gamma_phi = value,
            ParamAxis::GammaPair => {
                p.gamma_down = value;
                p.gamma_phi = value;
            }
        }
        p
    }

    /// True when two axes touch an overlapping set of parameters.
    fn conflicts_with(&self, other: &ParamAxis) -> bool {
        if self == other {
            return true;
        }
        let touches_gamma =
            |a: &ParamAxis| matches!(a, ParamAxis::GammaDown | ParamAxis::GammaPhi);
        (*self == ParamAxis::GammaPair && touches_gamma(other))
            || (*other == ParamAxis::GammaPair && touches_gamma(self))
    }
}

/// One sweep axis: a parameter, a range, and a point count.
#[derive(Debug, Clone, Copy)]
pub struct AxisSpec {
    /// Parameter being varied.
    pub param: ParamAxis,
    /// Lower end of the range.
    pub min: f64,
    /// Upper end of the range.
    pub max: f64,
    /// Number of grid points (≥ 2).
    pub points: usize,
    /// Log-uniform spacing instead of the default linear spacing.
    pub log: bool,
}

impl AxisSpec {
    /// Linear axis over `[min, max]` with `points` samples.
    pub fn linear(param: ParamAxis, min: f64, max: f64, points: usize) -> Self {
        Self {
            param,
            min,
            max,
            points,
            log: false,
        }
    }

    /// Log-uniform axis over `[min, max]` with `points` samples.
    pub fn log(param: ParamAxis, min: f64, max: f64, points: usize) -> Self {
        Self {
            param,
            min,
            max,
            points,
            log: true,
        }
    }

    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.points < 2 {
            v.push(format!(
                "axis {}: needs at least 2 points (got {})",
                self.param.name(),
                self.points
            ));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            v.push(format!(
                "axis {}: range [{}, {}] must be finite and increasing",
                self.param.name(),
                self.min,
                self.max
            ));
        }
        if self.log && self.min <= 0.0 {
            v.push(format!(
                "axis {}: log spacing needs min > 0 (got {})",
                self.param.name(),
                self.min
            ));
        }
        v
    }

    /// The grid values, with exact endpoints.
    pub fn values(&self) -> Vec<f64> {
        let k = self.points;
        let mut v: Vec<f64> = (0..k)
            .map(|i| {
                let f = i as f64 / (k - 1) as f64;
                if self.log {
                    (self.min.ln() + (self.max.ln() - self.min.ln()) * f).exp()
                } else {
                    self.min + (self.max - self.min) * f
                }
            })
            .collect();
        // exp/ln round trips miss the ends by an ulp; pin them.
        v[0] = self.min;
        v[k - 1] = self.max;
        v
    }
}

/// A two-axis sweep over a base parameter set.
#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    /// Parameters held fixed except along the axes.
    pub base: ModelParams,
    /// First axis (CSV column `axis1`, SVG x).
    pub axis1: AxisSpec,
    /// Second axis (CSV column `axis2`, SVG y).
    pub axis2: AxisSpec,
}

impl SweepConfig {
    fn validate(&self) -> Result<(), Error> {
        let mut v: Vec<String> = self
            .axis1
            .violations()
            .into_iter()
            .chain(self.axis2.violations())
            .collect();
        if self.axis1.param.conflicts_with(&self.axis2.param) {
            v.push(format!(
                "axes must vary distinct parameters (got {} and {})",
                self.axis1.param.name(),
                self.axis2.param.name()
            ));
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }
}

/// What happened at one grid point.
#[derive(Debug, Clone)]
pub enum CellOutcome {
    /// The point classified cleanly (boxed: the report is large and
    /// grids hold many cells).
    Classified(Box<Classification>),
    /// Classification failed; the error is recorded and the sweep went on.
    Failed(String),
}

/// One grid point of a phase diagram.
#[derive(Debug, Clone)]
pub struct Cell {
    /// Value of axis 1 at this point.
    pub axis1: f64,
    /// Value of axis 2 at this point.
    pub axis2: f64,
    /// Classification or recorded failure.
    pub outcome: CellOutcome,
}

impl Cell {
    /// Phase label, or `None` for a failed cell.
    pub fn label(&self) -> Option<PhaseLabel> {
        match &self.outcome {
            CellOutcome::Classified(c) => Some(c.label),
            CellOutcome::Failed(_) => None,
        }
    }

    /// Single-character CSV/legend code; failures print `E`.
    pub fn code(&self) -> char {
        self.label().map_or('E', |l| l.code())
    }
}

/// A complete rectangular phase diagram (no holes: one cell per grid point,
/// failures recorded in-cell).
#[derive(Debug, Clone)]
pub struct PhaseDiagram {
    /// The configuration that produced the grid.
    pub config: SweepConfig,
    /// Axis-1 grid values (length `config.axis1.points`).
    pub axis1_values: Vec<f64>,
    /// Axis-2 grid values (length `config.axis2.points`).
    pub axis2_values: Vec<f64>,
    /// Row-major cells: index `j * axis1.points + i` holds
    /// (axis1_values\[i\], axis2_values\[j\]).
    pub cells: Vec<Cell>,
}

impl PhaseDiagram {
    /// Cell at axis-1 index `i`, axis-2 index `j`.
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[j * self.axis1_values.len() + i]
    }

    /// Number of cells whose label satisfies `keep` (failed cells never count).
    pub fn area(&self, keep: impl Fn(PhaseLabel) -> bool) -> usize {
        self.cells
            .iter()
            .filter(|c| c.label().is_some_and(&keep))
            .count()
    }

    /// The set of label codes present (including `E` for failures).
    pub fn codes_present(&self) -> BTreeSet<char> {
        self.cells.iter().map(Cell::code).collect()
    }

    /// True if some cell labeled `a` is 4-neighbor adjacent to one labeled `b`.
    pub fn labels_adjacent(&self, a: PhaseLabel, b: PhaseLabel) -> bool {
        let (n1, n2) = (self.axis1_values.len(), self.axis2_values.len());
        for j in 0..n2 {
            for i in 0..n1 {
                if self.cell(i, j).label() != Some(a) {
                    continue;
                }
                let neighbors = [
                    (i.wrapping_sub(1), j),
                    (i + 1, j),
                    (i, j.wrapping_sub(1)),
                    (i, j + 1),
                ];
                for (ii, jj) in neighbors {
                    if ii < n1 && jj < n2 && self.cell(ii, jj).label() == Some(b) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Classifies every grid point of `config` (in parallel, deterministic
/// order). Per-point failures are recorded in their cells; the sweep always
/// returns a complete grid.
pub fn grid_sweep(config: &SweepConfig) -> Result<PhaseDiagram, Error> {
    config.validate()?;
    let axis1_values = config.axis1.values();
    let axis2_values = config.axis2.values();
    let n1 = axis1_values.len();

    let points: Vec<(f64, f64)> = axis2_values
        .iter()
        .flat_map(|&a2| axis1_values.iter().map(move |&a1| (a1, a2)))
        .collect();

    let cells: Vec<Cell> = points
        .par_iter()
        .map(|&(a1, a2)| {
            let p = config
                .axis2
                .param
                .apply(&config.axis1.param.apply(&config.base, a1), a2);
            let outcome = match classify(&p) {
                Ok(c) => CellOutcome::Classified(Box::new(c)),
                Err(e) => CellOutcome::Failed(e.to_string()),
            };
            Cell {
                axis1: a1,
                axis2: a2,
                outcome,
            }
        })
        .collect();
    debug_assert_eq!(cells.len(), n1 * axis2_values.len());

    Ok(PhaseDiagram {
        config: *config,
        axis1_values,
        axis2_values,
        cells,
    })
}

/// One sample of the photon-number curve.
#[derive(Debug, Clone, Copy)]
pub struct PhotonPoint {
    /// Coupling at this sample.
    pub g: f64,
    /// Steady superradiant photon number; NaN when no real branch exists.
    pub n_ss: f64,
    /// Whether the branch exists and passes the physicality screen.
    pub physical: bool,
    /// Whether the (physical) branch is linearly stable.
    pub stable: bool,
}

/// Photon-number curve along g (the superradiant branch pair's n, with
/// sentinels where the pair does not exist).
#[derive(Debug, Clone)]
pub struct PhotonCurve(pub Vec<PhotonPoint>);

impl std::ops::Deref for PhotonCurve {
    type Target = [PhotonPoint];
    fn deref(&self) -> &[PhotonPoint] {
        &self.0
    }
}

/// Evaluates the superradiant branch and its stability along a linear grid
/// of couplings. Nonexistent branches yield sentinel points, never errors.
pub fn photon_curve(
    params: &ModelParams,
    g_range: (f64, f64),
    n_points: usize,
) -> Result<PhotonCurve, Error> {
    let axis = AxisSpec::linear(ParamAxis::G, g_range.0, g_range.1, n_points);
    let mut v = axis.violations();
    if g_range.0 <= 0.0 {
        v.push(format!("g range must be positive (got min {})", g_range.0));
    }
    if !v.is_empty() {
        return Err(Error::InvalidParams(v));
    }

    let mut out = Vec::with_capacity(n_points);
    for g in axis.values() {
        let p = ParamAxis::G.apply(params, g);
        let point = match superradiant_branches(&p) {
            Ok(Branches::Pair([plus, _])) => {
                let stable = if plus.physical {
                    StabilityReport::from_matrix(&jacobian_superradiant(&p, &plus)?, 1e-9)?.stable
                } else {
                    false
                };
                PhotonPoint {
                    g,
                    n_ss: plus.state.n,
                    physical: plus.physical,
                    stable,
                }
            }
            Ok(Branches::None(_)) | Err(Error::InvalidParams(_)) | Err(Error::BetaUndefined) => {
                PhotonPoint {
                    g,
                    n_ss: f64::NAN,
                    physical: false,
                    stable: false,
                }
            }
            Err(e) => return Err(e),
        };
        out.push(point);
    }
    Ok(PhotonCurve(out))
}

/// Condition bisected by [`threshold_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanPredicate {
    /// The normal fixed point is linearly unstable.
    NormalUnstable,
    /// A physical superradiant branch exists and is linearly stable.
    SuperStable,
    /// A real superradiant branch pair exists.
    SuperExists,
}

/// How the predicate flips at the critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingType {
    /// A single real eigenvalue crosses the imaginary axis.
    RealEigenvalue,
    /// A complex-conjugate pair crosses (Hopf-like).
    ComplexPair,
    /// The branch itself appears/disappears (or turns unphysical).
    ExistenceEdge,
}

/// Result of a threshold bisection.
#[derive(Debug, Clone)]
pub struct ThresholdScan {
    /// Critical parameter value (midpoint of the final bracket).
    pub critical: f64,
    /// Mechanism of the crossing.
    pub crossing: CrossingType,
    /// Every bracket visited, outermost first; `critical` lies inside each.
    pub brackets: Vec<(f64, f64)>,
    /// Predicate value at the low end of the initial bracket.
    pub holds_at_low: bool,
}

/// One predicate evaluation plus the evidence needed to name the crossing.
struct PredicateSample {
    holds: bool,
    /// Leading eigenvalue (max Re) of the governing matrix, when there is one.
    leading: Option<(f64, f64)>,
    /// Whether a physical superradiant branch exists here (stability scans).
    branch_alive: bool,
}

fn sample_predicate(p: &ModelParams, pred: ScanPredicate) -> Result<PredicateSample, Error> {
    let leading_of = |r: &StabilityReport| {
        r.eigenvalues
            .iter()
            .max_by(|a, b| a.re.partial_cmp(&b.re).expect("finite eigenvalues"))
            .map(|l| (l.re, l.im))
    };
    match pred {
        ScanPredicate::NormalUnstable => {
            let r = StabilityReport::from_matrix(&jacobian_normal(p), 1e-9)?;
            Ok(PredicateSample {
                holds: r.spectral_abscissa > 0.0,
                leading: leading_of(&r),
                branch_alive: true,
            })
        }
        ScanPredicate::SuperStable | ScanPredicate::SuperExists => {
            let branch = match superradiant_branches(p) {
                Ok(Branches::Pair([plus, _])) => Some(plus),
                Ok(Branches::None(_))
                | Err(Error::InvalidParams(_))
                | Err(Error::BetaUndefined) => None,
                Err(e) => return Err(e),
            };
            if pred == ScanPredicate::SuperExists {
                return Ok(PredicateSample {
                    holds: branch.is_some(),
                    leading: None,
                    branch_alive: branch.is_some(),
                });
            }
            match branch {
                Some(b) if b.physical => {
                    let r =
                        StabilityReport::from_matrix(&jacobian_superradiant(p, &b)?, 1e-9)?;
                    Ok(PredicateSample {
                        holds: r.stable,
                        leading: leading_of(&r),
                        branch_alive: true,
                    })
                }
                _ => Ok(PredicateSample {
                    holds: false,
                    leading: None,
                    branch_alive: false,
                }),
            }
        }
    }
}

/// Bisects `scan_param` over `bracket` until the predicate flip is located
/// to [`BISECTION_TOL`]. The predicate must differ at the bracket ends.
pub fn threshold_scan(
    base: &ModelParams,
    scan_param: ParamAxis,
    bracket: (f64, f64),
    predicate: ScanPredicate,
) -> Result<ThresholdScan, Error> {
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParams(vec![format!(
            "scan bracket [{lo}, {hi}] must be finite and increasing"
        )]));
    }

    let at = |v: f64| sample_predicate(&scan_param.apply(base, v), predicate);
    let mut s_lo = at(lo)?;
    let mut s_hi = at(hi)?;
    if s_lo.holds == s_hi.holds {
        return Err(Error::PredicateConstant { lo, hi });
    }
    let holds_at_low = s_lo.holds;

    let mut brackets = vec![(lo, hi)];
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let s_mid = at(mid)?;
        if s_mid.holds == s_lo.holds {
            lo = mid;
            s_lo = s_mid;
        } else {
            hi = mid;
            s_hi = s_mid;
        }
        brackets.push((lo, hi));
    }

    // Name the crossing from the final bracket: if the branch dies across
    // it the flip is an existence edge; otherwise look at the leading
    // eigenvalue on the unstable side.
    let crossing = if predicate == ScanPredicate::SuperExists
        || s_lo.branch_alive != s_hi.branch_alive
    {
        CrossingType::ExistenceEdge
    } else {
        let unstable_side = match predicate {
            // "Holds" means unstable for NormalUnstable, stable for SuperStable.
            ScanPredicate::NormalUnstable => {
                if s_lo.holds {
                    &s_lo
                } else {
                    &s_hi
                }
            }
            _ => {
                if s_lo.holds {
                    &s_hi
                } else {
                    &s_lo
                }
            }
        };
        match unstable_side.leading {
            Some((re, im)) if im.abs() > 1e-6 * re.abs().max(1.0) => CrossingType::ComplexPair,
            Some(_) => CrossingType::RealEigenvalue,
            None => CrossingType::ExistenceEdge,
        }
    };

    Ok(ThresholdScan {
        critical: 0.5 * (lo + hi),
        crossing,
        brackets,
        holds_at_low,
    })
}

/// Anything that serializes to a CSV document.
pub trait CsvArtifact {
    /// The full CSV text, header included, LF line endings.
    fn to_csv(&self) -> String;
}

impl CsvArtifact for PhaseDiagram {
    fn to_csv(&self) -> String {
        let mut out = String::from("axis1,axis2,label,abscissa_normal,abscissa_super,n_ss\n");
        for cell in &self.cells {
            let (normal, superr, n_ss) = match &cell.outcome {
                CellOutcome::Classified(c) => (
                    c.normal.spectral_abscissa,
                    c.superradiant
                        .as_ref()
                        .map_or(f64::NAN, |r| r.spectral_abscissa),
                    c.n_ss().unwrap_or(f64::NAN),
                ),
                CellOutcome::Failed(_) => (f64::NAN, f64::NAN, f64::NAN),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                format_float(cell.axis1),
                format_float(cell.axis2),
                cell.code(),
                format_float(normal),
                format_float(superr),
                format_float(n_ss),
            ));
        }
        out
    }
}

impl CsvArtifact for PhotonCurve {
    fn to_csv(&self) -> String {
        let mut out = String::from("g,n_ss,physical,stable\n");
        for p in self.iter() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_float(p.g),
                format_float(p.n_ss),
                p.physical,
                p.stable,
            ));
        }
        out
    }
}

/// Writes any CSV artifact to `path`.
pub fn write_csv<A: CsvArtifact>(artifact: &A, path: &Path) -> Result<(), Error> {
    write_text(path, &artifact.to_csv())
}

/// Renders the diagram as a minimal self-contained SVG heatmap (one `rect`
/// per cell, axis labels, a four-entry legend, no timestamps).
pub fn render_svg(diagram: &PhaseDiagram, path: &Path) -> Result<(), Error> {
    write_text(path, &diagram.to_svg())
}

const SVG_COLORS: [(char, &str, &str); 5] = [
    ('N', "#4c72b0", "normal"),
    ('S', "#c44e52", "superradiant"),
    ('B', "#55a868", "bistable"),
    ('I', "#8172b2", "unstable"),
    ('E', "#aaaaaa", "failed"),
];

fn color_for(code: char) -> &'static str {
    SVG_COLORS
        .iter()
        .find(|(c, _, _)| *c == code)
        .map(|(_, color, _)| *color)
        .unwrap_or("#000000")
}

impl PhaseDiagram {
    /// The SVG heatmap as a string. Deterministic: no timestamps, no
    /// randomness; identical diagrams give identical bytes.
    pub fn to_svg(&self) -> String {
        let (x0, y0, pw, ph) = (70.0, 20.0, 480.0, 360.0);
        let (n1, n2) = (self.axis1_values.len(), self.axis2_values.len());
        let (cw, chh) = (pw / n1 as f64, ph / n2 as f64);

        let mut s = String::new();
        s.push_str(concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"460\" ",
            "viewBox=\"0 0 720 460\">\n",
            "<rect width=\"720\" height=\"460\" fill=\"#ffffff\"/>\n",
        ));
        for j in 0..n2 {
            for i in 0..n1 {
                let cell = self.cell(i, j);
                let x = x0 + cw * i as f64;
                let y = y0 + chh * (n2 - 1 - j) as f64;
                s.push_str(&format!(
                    "<rect class=\"cell\" x=\"{x:.3}\" y=\"{y:.3}\" width=\"{cw:.3}\" \
                     height=\"{chh:.3}\" fill=\"{}\"/>\n",
                    color_for(cell.code()),
                ));
            }
        }
        // Frame and axis annotation.
        s.push_str(&format!(
            "<rect x=\"{x0}\" y=\"{y0}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" \
             stroke=\"#000000\"/>\n"
        ));
        let font = "font-family=\"sans-serif\" font-size=\"14\" fill=\"#000000\"";
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"435\" text-anchor=\"middle\" {font}>{}</text>\n",
            x0 + pw / 2.0,
            self.config.axis1.param.name(),
        ));
        s.push_str(&format!(
            "<text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" {font} \
             transform=\"rotate(-90 18 {:.1})\">{}</text>\n",
            y0 + ph / 2.0,
            y0 + ph / 2.0,
            self.config.axis2.param.name(),
        ));
        for (v, x, anchor) in [
            (self.axis1_values[0], x0, "start"),
            (*self.axis1_values.last().unwrap(), x0 + pw, "end"),
        ] {
            s.push_str(&format!(
                "<text x=\"{x:.1}\" y=\"410\" text-anchor=\"{anchor}\" {font}>{v}</text>\n"
            ));
        }
        for (v, y) in [
            (self.axis2_values[0], y0 + ph),
            (*self.axis2_values.last().unwrap(), y0 + 12.0),
        ] {
            s.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{y:.1}\" text-anchor=\"end\" {font}>{v}</text>\n",
                x0 - 6.0,
            ));
        }
        // Legend: the four phase labels.
        for (k, (code, color, name)) in SVG_COLORS.iter().take(4).enumerate() {
            let y = y0 + 20.0 + 34.0 * k as f64;
            s.push_str(&format!(
                "<rect class=\"legend\" x=\"570\" y=\"{y:.1}\" width=\"18\" height=\"18\" \
                 fill=\"{color}\" stroke=\"#000000\"/>\n\
                 <text x=\"594\" y=\"{:.1}\" {font}>{code} {name}</text>\n",
                y + 14.0,
            ));
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig1_params(g: f64) -> ModelParams {
        ModelParams {
            omega_c: 1.0,
            omega_0: 1.0,
            g,
            n_qubits: 100,
            kappa: 1.0,
            gamma_down: 3.0,
            gamma_phi: 3.0,
        }
    }

    fn grid(
        base: ModelParams,
        g: (f64, f64, usize),
        w0: (f64, f64, usize),
    ) -> PhaseDiagram {
        let cfg = SweepConfig {
            base,
            axis1: AxisSpec::linear(ParamAxis::G, g.0, g.1, g.2),
            axis2: AxisSpec::linear(ParamAxis::Omega0, w0.0, w0.1, w0.2),
        };
        grid_sweep(&cfg).unwrap()
    }

    #[test]
    fn axis_values_hit_endpoints_exactly() {
        let lin = AxisSpec::linear(ParamAxis::G, 1.0, 14.0, 25).values();
        assert_eq!(lin.len(), 25);
        assert_eq!(lin[0], 1.0);
        assert_eq!(lin[24], 14.0);
        let log = AxisSpec::log(ParamAxis::G, 1.0, 1000.0, 4).values();
        assert_relative_eq!(log[1], 10.0, max_relative = 1e-12);
        assert_relative_eq!(log[2], 100.0, max_relative = 1e-12);
        assert_eq!(log[3], 1000.0);
    }

    #[test]
    fn config_rejects_conflicting_axes() {
        let cfg = SweepConfig {
            base: fig1_params(1.0),
            axis1: AxisSpec::linear(ParamAxis::GammaPair, 0.1, 2.0, 3),
            axis2: AxisSpec::linear(ParamAxis::GammaPhi, 0.1, 2.0, 3),
        };
        assert!(matches!(grid_sweep(&cfg), Err(Error::InvalidParams(_))));
        let cfg2 = SweepConfig {
            base: fig1_params(1.0),
            axis1: AxisSpec::linear(ParamAxis::G, 1.0, 2.0, 1),
            axis2: AxisSpec::linear(ParamAxis::Omega0, 0.5, 1.0, 3),
        };
        assert!(matches!(grid_sweep(&cfg2), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn axis_name_round_trip() {
        for name in ["omega_c", "omega_0", "g", "kappa", "gamma_down", "gamma_phi", "gamma"] {
            assert_eq!(ParamAxis::from_name(name).unwrap().name(), name);
        }
        assert!(matches!(
            ParamAxis::from_name("n_qubits"),
            Err(Error::UnknownAxis(_))
        ));
    }

    #[test]
    fn deep_subcritical_grid_is_all_normal() {
        let d = grid(fig1_params(1.0), (0.01, 0.02, 2), (0.5, 1.0, 2));
        assert_eq!(d.cells.len(), 4);
        assert!(d.cells.iter().all(|c| c.label() == Some(PhaseLabel::Normal)));
    }

    #[test]
    fn strong_dissipation_grid_has_bistable_band_touching_superradiant() {
        let d = grid(fig1_params(1.0), (1.0, 14.0, 12), (0.05, 4.0, 12));
        let codes = d.codes_present();
        assert!(codes.contains(&'N') && codes.contains(&'S') && codes.contains(&'B'));
        assert!(!codes.contains(&'E'));
        assert!(d.labels_adjacent(PhaseLabel::Bistable, PhaseLabel::Superradiant));
    }

    #[test]
    fn weak_dissipation_slice_shows_all_four_phases() {
        let mut base = fig1_params(1.0);
        base.gamma_down = 1.5;
        base.gamma_phi = 1.5;
        let d = grid(base, (1.0, 14.0, 13), (0.05, 0.5, 5));
        assert_eq!(d.codes_present(), ['B', 'I', 'N', 'S'].into_iter().collect());
    }

    #[test]
    fn superradiant_area_shrinks_with_qubit_number_at_weak_dissipation() {
        let mut base = fig1_params(1.0);
        base.gamma_down = 1.5;
        base.gamma_phi = 1.5;
        let area = |n: usize| {
            let mut b = base;
            b.n_qubits = n;
            grid(b, (1.0, 14.0, 12), (0.05, 4.0, 12)).area(|l| {
                matches!(l, PhaseLabel::Superradiant | PhaseLabel::Bistable)
            })
        };
        let (a10, a100) = (area(10), area(100));
        assert!(a10 > a100, "area N=10 {a10} vs N=100 {a100}");
        assert!(a10 > 50 && a100 <= 5, "a10={a10} a100={a100}");
    }

    #[test]
    fn photon_curve_below_existence_edge_is_unphysical() {
        let curve = photon_curve(&fig1_params(1.0), (0.1, 0.6), 10).unwrap();
        assert_eq!(curve.len(), 10);
        for p in curve.iter() {
            assert!(!p.physical && !p.stable);
            assert!(p.n_ss.is_nan());
        }
    }

    #[test]
    fn photon_number_grows_with_qubit_number_at_fixed_coupling() {
        // Frozen reference values from the closed-form branch at g = 4.
        let expect = [(10, 3.721_229), (50, 19.708_851), (100, 39.707_328)];
        let mut last = f64::NEG_INFINITY;
        for (n, n_ss_ref) in expect {
            let mut p = fig1_params(4.0);
            p.n_qubits = n;
            let curve = photon_curve(&p, (4.0, 5.0), 2).unwrap();
            let head = curve[0];
            assert!(head.physical && head.stable);
            assert_relative_eq!(head.n_ss, n_ss_ref, max_relative = 1e-6);
            assert!(head.n_ss > last);
            last = head.n_ss;
        }
    }

    #[test]
    fn threshold_scan_recovers_normal_instability_at_g_t() {
        let base = fig1_params(1.0);
        let scan = threshold_scan(&base, ParamAxis::G, (2.5, 3.5), ScanPredicate::NormalUnstable)
            .unwrap();
        assert!((scan.critical - base.g_t()).abs() < 2.0 * BISECTION_TOL);
        assert_eq!(scan.crossing, CrossingType::RealEigenvalue);
        assert!(!scan.holds_at_low);
        for (lo, hi) in &scan.brackets {
            assert!(*lo <= scan.critical && scan.critical <= *hi);
        }
        let (final_lo, final_hi) = *scan.brackets.last().unwrap();
        assert!(final_hi - final_lo <= BISECTION_TOL);
    }

    #[test]
    fn locked_gamma_scan_finds_dissipative_stabilization_threshold() {
        let mut base = fig1_params(3.0);
        base.omega_0 = 2.0;
        let scan = threshold_scan(
            &base,
            ParamAxis::GammaPair,
            (0.2, 3.0),
            ScanPredicate::SuperStable,
        )
        .unwrap();
        assert!(
            (1.4..=1.8).contains(&scan.critical),
            "Γ* = {}",
            scan.critical
        );
        // The branch exists on both sides; the flip is an eigenvalue pair
        // crossing the axis with Im ≈ 2.
        assert_eq!(scan.crossing, CrossingType::ComplexPair);
    }

    #[test]
    fn dephasing_alone_stabilizes_and_never_destabilizes() {
        let mut base = fig1_params(1.0);
        base.omega_0 = 2.0;
        base.gamma_down = 1.5;
        // Predicate sampled along the scan axis is monotone false→true.
        let mut seen_true = false;
        for i in 0..12 {
            let gp = 0.05 + (2.5 - 0.05) * i as f64 / 11.0;
            let p = ParamAxis::GammaPhi.apply(&base, gp);
            let holds = sample_predicate(&p, ScanPredicate::SuperStable)
                .unwrap()
                .holds;
            if seen_true {
                assert!(holds, "stability lost again at Γφ = {gp}");
            }
            seen_true |= holds;
        }
        assert!(seen_true);
        let scan = threshold_scan(
            &base,
            ParamAxis::GammaPhi,
            (0.05, 2.5),
            ScanPredicate::SuperStable,
        )
        .unwrap();
        assert!(scan.critical > 1.8 && scan.critical < 2.0, "Γφ* = {}", scan.critical);
    }

    #[test]
    fn threshold_scan_rejects_constant_predicate() {
        let base = fig1_params(1.0);
        assert!(matches!(
            threshold_scan(&base, ParamAxis::G, (4.0, 5.0), ScanPredicate::NormalUnstable),
            Err(Error::PredicateConstant { .. })
        ));
    }

    #[test]
    fn existence_edge_crossing_is_named() {
        let base = fig1_params(1.0);
        let scan = threshold_scan(&base, ParamAxis::G, (0.3, 1.0), ScanPredicate::SuperExists)
            .unwrap();
        assert_eq!(scan.crossing, CrossingType::ExistenceEdge);
        assert!(scan.critical > 0.3 && scan.critical < 1.0);
    }

    #[test]
    fn phase_csv_round_trips_and_is_deterministic() {
        let d = grid(fig1_params(1.0), (0.5, 4.0, 3), (0.5, 1.5, 3));
        let csv1 = d.to_csv();
        let csv2 = grid(fig1_params(1.0), (0.5, 4.0, 3), (0.5, 1.5, 3)).to_csv();
        assert_eq!(csv1, csv2);
        let lines: Vec<&str> = csv1.lines().collect();
        assert_eq!(lines[0], "axis1,axis2,label,abscissa_normal,abscissa_super,n_ss");
        assert_eq!(lines.len(), 1 + 9);
        for (line, cell) in lines[1..].iter().zip(&d.cells) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 6);
            assert_eq!(fields[2].chars().next().unwrap(), cell.code());
            let a1: f64 = fields[0].parse().unwrap();
            assert_relative_eq!(a1, cell.axis1, max_relative = 1e-15);
        }
    }

    #[test]
    fn photon_csv_has_documented_schema() {
        let curve = photon_curve(&fig1_params(1.0), (0.5, 4.0), 4).unwrap();
        let csv = curve.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "g,n_ss,physical,stable");
        assert_eq!(lines.len(), 5);
        // Sentinel for the nonexistent branch is a lowercase bare nan.
        assert!(lines[1].contains(",nan,"));
    }

    #[test]
    fn csv_files_written_with_path_context() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curve.csv");
        let curve = photon_curve(&fig1_params(1.0), (0.5, 4.0), 4).unwrap();
        write_csv(&curve, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), curve.to_csv());
        let bad = dir.path().join("missing").join("curve.csv");
        match write_csv(&curve, &bad) {
            Err(Error::Io { path: p, .. }) => assert!(p.ends_with("curve.csv")),
            other => panic!("expected Io error, got {other:?}"),
        }
    }

    #[test]
    fn svg_has_one_rect_per_cell_and_a_four_entry_legend() {
        let d = grid(fig1_params(1.0), (0.5, 4.0, 4), (0.5, 1.5, 3));
        let svg = d.to_svg();
        assert_eq!(svg.matches("class=\"cell\"").count(), 12);
        assert_eq!(svg.matches("class=\"legend\"").count(), 4);
        assert!(svg.contains(">g</text>") && svg.contains(">omega_0</text>"));
        assert_eq!(svg, d.to_svg());
    }

    #[test]
    fn sweep_results_do_not_depend_on_worker_count() {
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| grid(fig1_params(1.0), (1.0, 6.0, 4), (0.5, 2.0, 4)).to_csv())
        };
        assert_eq!(run(1), run(4));
    }
}
