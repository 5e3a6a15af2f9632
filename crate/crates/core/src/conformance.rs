//! End-to-end checks of the acceptance criteria, each returning a measured
//! outcome rather than panicking, so that the CLI and the test suite share
//! one implementation.

use crate::eigen::{apply_h_theta, biorthogonality_matrix, eigenfunction, eigenvalue, EigenstateId, Side};
use crate::error::{CsmError, Result};
use crate::model::{classify_region, derive_quantities, Branch, DerivedQuantities, ModelParams, RegionClass, EP_TOLERANCE};
use crate::packets::{
    continuity_residual, density_closed, moments, moments_numeric, packet_analytic, packet_evolved_closed, persistence_numeric, persistence_q,
    survival_general, survival_probability, DensityRegime, PacketKind,
};
use crate::propagator::{evolve_quadrature_many, measured_evolution_ratio, uniform_grid, ComplexField, FieldSide};
use crate::rhs::csm_rhs_equivalence_report;
use crate::special::{integrate_line, QuadraturePolicy};
use crate::wigner::{density_from_wigner_fn, packet_marginal_contour, wigner_half_width, wigner_mn, wigner_numeric, wigner_packet_closed, wigner_packet_xp};
use crate::propagator::eigenstate_evolved;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;
use std::time::Instant;

/// `|Ω|` values of the survival families.
pub const SURVIVAL_KAPPAS: [f64; 6] = [0.5, 0.4, 0.3, 0.2, 0.1, 0.01];
/// Threshold for the near-EP survival at `t = 1`.
pub const NEAR_EP_SURVIVAL: f64 = 0.97;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub measurements: Vec<Measurement>,
    pub notes: Vec<String>,
    pub elapsed_s: f64,
    /// Wall-clock budget in seconds, when the criterion states one.
    pub budget_s: Option<f64>,
}

impl CriterionOutcome {
    fn new(id: u8, name: &str) -> Self {
        Self { id, name: name.into(), passed: true, measurements: Vec::new(), notes: Vec::new(), elapsed_s: 0.0, budget_s: None }
    }

    /// Record `value ≤ tolerance`.
    fn at_most(&mut self, name: impl Into<String>, value: f64, tolerance: f64) -> bool {
        let passed = value <= tolerance && value.is_finite();
        self.record(name, value, tolerance, passed)
    }

    fn record(&mut self, name: impl Into<String>, value: f64, tolerance: f64, passed: bool) -> bool {
        self.passed &= passed;
        self.measurements.push(Measurement { name: name.into(), value, tolerance, passed });
        passed
    }

    fn fail(&mut self, note: impl Into<String>) {
        self.passed = false;
        self.notes.push(note.into());
    }

    fn finish(mut self, start: Instant, budget: Option<f64>) -> Self {
        self.elapsed_s = start.elapsed().as_secs_f64();
        self.budget_s = budget;
        if let Some(b) = budget {
            if self.elapsed_s > b {
                self.notes.push(format!("runtime {:.1} s over the {b} s budget", self.elapsed_s));
                self.passed = false;
            }
        }
        self
    }

    /// One summary line, `PASS`/`FAIL` first.
    pub fn line(&self) -> String {
        let worst = self.measurements.iter().filter(|m| !m.passed).map(|m| format!("{}={:.3e} (tol {:.1e})", m.name, m.value, m.tolerance)).collect::<Vec<_>>();
        format!(
            "{} criterion {:>2} {}: {} measurements, {:.2} s{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measurements.len(),
            self.elapsed_s,
            if worst.is_empty() { String::new() } else { format!("; failing: {}", worst.join(", ")) }
        )
    }
}

fn guarded(id: u8, name: &str, f: impl FnOnce(&mut CriterionOutcome) -> Result<()>) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(id, name);
    if let Err(e) = f(&mut out) {
        out.fail(format!("error: {e}"));
    }
    out
}

/// Criterion 1: Gram matrix of `n, m ≤ 20` at `θ = π/4`, − branch.
pub fn criterion_1(d: &DerivedQuantities) -> CriterionOutcome {
    let start = Instant::now();
    guarded(1, "biorthonormality", |o| {
        let g = biorthogonality_matrix(d, FRAC_PI_4, 21, Branch::Minus, &QuadraturePolicy::default())?;
        let mut dev = 0.0f64;
        for (m, row) in g.iter().enumerate() {
            for (n, v) in row.iter().enumerate() {
                let want = if m == n { 1.0 } else { 0.0 };
                dev = dev.max((v - want).norm());
            }
        }
        o.at_most("gram_max_abs_deviation", dev, 1e-8);
        Ok(())
    })
    .finish(start, Some(10.0))
}

/// Outcome of the evolution-phase comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseVerdict {
    /// `"1"` when the measured constant phase is 1 for every state.
    pub verdict: String,
    pub max_phase_rad: f64,
}

/// Criterion 2: kernel-evolved `φ̃ₙ⁻` against `e^{−n|Ω|t}` times the
/// zero-point factor, `n ≤ 10`, `|Ω|t ∈ {0.5, 1, 2}`.
pub fn criterion_2(d: &DerivedQuantities) -> (CriterionOutcome, PhaseVerdict) {
    let start = Instant::now();
    let mut max_phase = 0.0f64;
    let out = guarded(2, "propagator oracle", |o| {
        let l = 12.0 / d.inv_length();
        let xs = uniform_grid(-l, l, 2401)?;
        let fields: Vec<ComplexField> = (0..=10)
            .map(|n| {
                let id = EigenstateId::new(n, Branch::Minus, Side::Tilde);
                ComplexField::from_fn(&xs, FRAC_PI_4, 0.0, FieldSide::Tilde, |x| eigenfunction(id, d, FRAC_PI_4, x).unwrap_or_default())
            })
            .collect();
        for kt in [0.5, 1.0, 2.0] {
            let t = kt / d.kappa();
            let evolved = evolve_quadrature_many(&fields, d, t)?;
            let (mut mag, mut shape) = (0.0f64, 0.0f64);
            for (n, (field, _)) in evolved.iter().enumerate() {
                // The ratio to zero-point·φ̃ₙ is the prefactor e^{−n|Ω|t}·(phase).
                let (ratio, _) = measured_evolution_ratio(field, d, n, Branch::Minus)?;
                mag = mag.max((ratio.norm() / (-(n as f64) * kt).exp() - 1.0).abs());
                max_phase = max_phase.max(ratio.arg().abs());
                let (mut diff, mut peak) = (0.0f64, 0.0f64);
                for (&x, v) in field.x.iter().zip(&field.values) {
                    let want = eigenstate_evolved(d, FRAC_PI_4, n, Branch::Minus, FieldSide::Tilde, x, t)?;
                    diff = diff.max((v - want).norm());
                    peak = peak.max(want.norm());
                }
                shape = shape.max(diff / peak);
            }
            o.at_most(format!("magnitude_rel_err_kt{kt}"), mag, 1e-6);
            o.at_most(format!("sup_norm_rel_err_kt{kt}"), shape, 1e-6);
        }
        Ok(())
    })
    .finish(start, Some(30.0));
    let verdict = if max_phase <= 1e-6 { "1" } else { "not constant 1" };
    (out, PhaseVerdict { verdict: verdict.into(), max_phase_rad: max_phase })
}

/// Criterion 3: survival closed forms vs kernel quadrature for the `|Ω|`
/// families, monotonicity, and the near-EP value at `t = 1`.
pub fn criterion_3() -> CriterionOutcome {
    let start = Instant::now();
    guarded(3, "survival curves", |o| {
        let pol = QuadraturePolicy::default().with_tolerances(1e-14, 1e-9);
        let mut worst = 0.0f64;
        let mut monotone = true;
        for &kappa in &SURVIVAL_KAPPAS {
            let d = derive_quantities(&ModelParams::inverted_family(kappa))?;
            let l = 12.0 / d.inv_length();
            let grid = uniform_grid(-l, l, 1201)?;
            for kind in PacketKind::ALL {
                for kt in [0.25, 0.5, 1.0, 1.5, 2.0] {
                    let p = survival_general(|w| packet_analytic(kind, &d, w), &d, FRAC_PI_4, kt / kappa, &grid, &pol)?;
                    let c = survival_probability(kind, kt);
                    worst = worst.max((p - c).abs() / c);
                }
                let curve: Vec<f64> = (0..=100).map(|i| survival_probability(kind, 5.0 * i as f64 / 100.0)).collect();
                monotone &= curve.windows(2).all(|w| w[1] <= w[0]);
            }
        }
        o.at_most("closed_vs_quadrature_rel_err", worst, 1e-6);
        o.record("curves_nonincreasing", if monotone { 1.0 } else { 0.0 }, 1.0, monotone);
        let near_ep = PacketKind::ALL.iter().map(|&k| survival_probability(k, 0.01)).fold(f64::INFINITY, f64::min);
        if o.record("min_survival_kappa0.01_t1", near_ep, NEAR_EP_SURVIVAL, near_ep > NEAR_EP_SURVIVAL) {
            return Ok(());
        }
        o.notes.push(format!(
            "at |Omega| = 0.01, t = 1 the closed forms give P_g = {:.6}, P_c = {:.6}, P_s = {:.6}; \
             P_g = exp(4(e^-0.01 - 1)) e^-0.01 ~ 1 - 0.05, so the 0.97 threshold would need |Omega| t <~ 0.006",
            survival_probability(PacketKind::Gaussian, 0.01),
            survival_probability(PacketKind::Cosh, 0.01),
            survival_probability(PacketKind::Sinh, 0.01)
        ));
        Ok(())
    })
    .finish(start, Some(60.0))
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Criterion 4: Wigner quadrature vs closed forms on 21×21 grids.
pub fn criterion_4(d: &DerivedQuantities) -> CriterionOutcome {
    let start = Instant::now();
    guarded(4, "wigner oracle", |o| {
        let theta = FRAC_PI_4;
        let sig = d.inv_length();
        let xs = axis(-4.0 / sig, 4.0 / sig, 21);
        let p_half = 4.0 * d.hbar * sig + 4.0 * d.hbar * d.gamma.abs() / sig;
        let ps = axis(-p_half, p_half, 21);
        let t = 0.5 / d.kappa();
        let pol = QuadraturePolicy::default().with_half_width(wigner_half_width(d, t)).with_tolerances(1e-11, 1e-10);
        for m in 0..3 {
            for n in 0..3 {
                let bar = |x: f64| eigenstate_evolved(d, theta, m, Branch::Minus, FieldSide::Bar, x, t).unwrap_or_default();
                let tilde = |x: f64| eigenstate_evolved(d, theta, n, Branch::Minus, FieldSide::Tilde, x, t).unwrap_or_default();
                let (mut diff, mut peak) = (0.0f64, 0.0f64);
                for &x in &xs {
                    for &p in &ps {
                        let num = wigner_numeric(bar, tilde, d, x, p, &pol)?.value;
                        let cf = wigner_mn(d, theta, m, n, Branch::Minus, x, p, t)?;
                        diff = diff.max((num - cf).norm());
                        peak = peak.max(cf.norm());
                    }
                }
                o.at_most(format!("W{m}{n}_rel_err"), diff / peak, 1e-6);
            }
        }
        let xs = axis(-5.0 / sig, 5.0 / sig, 21);
        for kt in [0.0, 1.0] {
            let t = kt / d.kappa();
            let pol = QuadraturePolicy::default().with_half_width(wigner_half_width(d, t)).with_tolerances(1e-11, 1e-10);
            for kind in PacketKind::ALL {
                let bar = |x: f64| packet_evolved_closed(kind, FieldSide::Bar, d, theta, x, t).unwrap_or_default();
                let tilde = |x: f64| packet_evolved_closed(kind, FieldSide::Tilde, d, theta, x, t).unwrap_or_default();
                let (mut diff, mut peak) = (0.0f64, 0.0f64);
                for &x in &xs {
                    for &p in &ps {
                        let num = wigner_numeric(bar, tilde, d, x, p, &pol)?.value;
                        let cf = wigner_packet_xp(kind, d, theta, x, p, t);
                        diff = diff.max((num - cf).norm());
                        peak = peak.max(cf.norm());
                    }
                }
                o.at_most(format!("W_{}_kt{kt}_rel_err", kind.label()), diff / peak, 1e-6);
            }
        }
        Ok(())
    })
    .finish(start, Some(120.0))
}

/// Criterion 5: `∫W dp` against the closed densities and `∫ρ dX = 1`.
pub fn criterion_5() -> CriterionOutcome {
    let start = Instant::now();
    guarded(5, "marginals and normalization", |o| {
        for kt in [0.0f64, 1.0, 2.0, 3.0] {
            let c = 2.0 * kt.cosh();
            let pol = QuadraturePolicy::default().with_half_width(c + 12.0).with_tolerances(1e-13, 1e-11);
            for kind in PacketKind::ALL {
                let mut worst = 0.0f64;
                let mut peak = 0.0f64;
                let mut worst_direct = 0.0f64;
                for i in 0..=40 {
                    let x = -c - 4.0 + (2.0 * c + 8.0) * i as f64 / 40.0;
                    let want = density_closed(kind, x, kt, DensityRegime::Exact);
                    peak = peak.max(want);
                    let marg = packet_marginal_contour(kind, x, kt, &pol)?;
                    worst = worst.max((marg.value - want).norm());
                    if kt <= 1.0 {
                        // Scaled units: ħ = 1 and the packet form is unit-normalised.
                        let xs = Complex64::new(x, 0.0);
                        let direct = density_from_wigner_fn(|p| 2.0 * std::f64::consts::PI * wigner_packet_closed(kind, Complex64::new(p, 0.0), xs, kt), 1.0, &pol)?;
                        worst_direct = worst_direct.max((direct.value - want).norm());
                    }
                }
                o.at_most(format!("marginal_{}_kt{kt}", kind.label()), worst / peak, 1e-6);
                if kt <= 1.0 {
                    o.at_most(format!("marginal_real_axis_{}_kt{kt}", kind.label()), worst_direct / peak, 1e-6);
                }
                let total = integrate_line(|x| Complex64::new(density_closed(kind, x, kt, DensityRegime::Exact), 0.0), &pol)?.value.re;
                o.at_most(format!("norm_{}_kt{kt}", kind.label()), (total - 1.0).abs(), 1e-8);
            }
        }
        Ok(())
    })
    .finish(start, None)
}

/// Criterion 6: continuity residual and its `O(h²)` convergence.
pub fn criterion_6(d: &DerivedQuantities) -> CriterionOutcome {
    let start = Instant::now();
    guarded(6, "continuity equation", |o| {
        let t = 1.0 / d.kappa();
        let grid: Vec<f64> = (0..=200).map(|i| -10.0 + 0.1 * i as f64).collect();
        for kind in PacketKind::ALL {
            let r = continuity_residual(kind, d, &grid, t, 1e-3, 1e-3)?;
            o.at_most(format!("residual_{}", kind.label()), r.relative(), 1e-5);
            let r2 = continuity_residual(kind, d, &grid, t, 5e-4, 5e-4)?;
            let order = (r.max_residual / r2.max_residual).log2();
            o.record(format!("order_{}", kind.label()), order, 2.0, (order - 2.0).abs() < 0.1);
        }
        Ok(())
    })
    .finish(start, None)
}

/// Criterion 7: quadrature moments against the table.
pub fn criterion_7() -> CriterionOutcome {
    let start = Instant::now();
    guarded(7, "moments table", |o| {
        let pol = QuadraturePolicy::default().with_tolerances(1e-14, 1e-13);
        for kind in PacketKind::ALL {
            for kt in [0.0, 1.0] {
                let a = moments(kind, kt);
                let b = moments_numeric(kind, kt, &pol)?;
                o.at_most(format!("mean_{}_kt{kt}", kind.label()), (a.mean_x - b.mean_x).abs(), 1e-8);
                o.at_most(format!("second_{}_kt{kt}", kind.label()), (a.mean_x2 - b.mean_x2).abs(), 1e-8);
            }
        }
        for kt in [0.0, 0.5, 1.0, 2.0] {
            let v = moments_numeric(PacketKind::Gaussian, kt, &pol)?.var_x;
            o.at_most(format!("gaussian_var_kt{kt}"), (v - 0.5).abs(), 1e-8);
        }
        Ok(())
    })
    .finish(start, None)
}

/// Criterion 8: persistence closed form vs quadrature, and the plateau then
/// decay shape at `L = 200`.
pub fn criterion_8(d: &DerivedQuantities) -> CriterionOutcome {
    let start = Instant::now();
    guarded(8, "persistence", |o| {
        let pol = QuadraturePolicy::default().with_tolerances(1e-14, 1e-12);
        let k = d.kappa();
        for kind in PacketKind::ALL {
            let mut worst = 0.0f64;
            for l in [3.0, 7.0, 200.0] {
                for kt in [0.0, 1.0, 2.5, 5.0] {
                    let a = persistence_q(kind, d, FRAC_PI_4, l, kt / k)?;
                    let b = persistence_numeric(kind, d, FRAC_PI_4, l, kt / k, &pol)?;
                    worst = worst.max((a - b).norm());
                }
            }
            o.at_most(format!("closed_vs_quadrature_{}", kind.label()), worst, 1e-8);
            let curve: Vec<f64> = (0..=100).map(|i| persistence_q(kind, d, FRAC_PI_4, 200.0, 5.0 / k * i as f64 / 100.0).map(|q| q.re)).collect::<Result<_>>()?;
            let ls = d.inv_length() * 200.0;
            // Plateau while the packet centres stay well inside, 2cosh|Ω|t < L_scaled − 6.
            let plateau = curve
                .iter()
                .enumerate()
                .filter(|(i, _)| 2.0 * (5.0 * *i as f64 / 100.0).cosh() < ls - 6.0)
                .map(|(_, q)| (q - 1.0).abs())
                .fold(0.0, f64::max);
            o.at_most(format!("plateau_{}", kind.label()), plateau, 1e-10);
            let monotone = curve.windows(2).all(|w| w[1] <= w[0] + 1e-15);
            o.record(format!("nonincreasing_{}", kind.label()), if monotone { 1.0 } else { 0.0 }, 1.0, monotone);
            let end = *curve.last().unwrap();
            o.at_most(format!("decayed_{}_kt5", kind.label()), end, 0.5);
        }
        Ok(())
    })
    .finish(start, None)
}

/// Exceptional-point parameters `α = β = −ω/2`.
pub fn ep_params(omega: f64) -> ModelParams {
    ModelParams::new(omega, -omega / 2.0, -omega / 2.0)
}

/// Criterion 9: survival `≡ 1` and `t`-independent EP densities.
pub fn criterion_9(params: &ModelParams) -> CriterionOutcome {
    let start = Instant::now();
    guarded(9, "exceptional point", |o| {
        let region = classify_region(params, EP_TOLERANCE)?;
        if region != RegionClass::ExceptionalPoint {
            return Err(CsmError::InvalidInput(format!("parameters are {region:?}, not an exceptional point")));
        }
        let d = derive_quantities(params)?;
        let k = d.kappa();
        let ts = [0.0, 1.0, 10.0, 100.0];
        let mut surv = 0.0f64;
        let mut dens = 0.0f64;
        for kind in PacketKind::ALL {
            for &t in &ts {
                surv = surv.max((survival_probability(kind, k * t) - 1.0).abs());
                for i in 0..=80 {
                    let x = -8.0 + 0.2 * i as f64;
                    let a = density_closed(kind, x, k * t, DensityRegime::Exact);
                    let b = density_closed(kind, x, t, DensityRegime::ExceptionalPoint);
                    dens = dens.max((a - b).abs());
                }
            }
        }
        o.record("survival_minus_one", surv, 0.0, surv == 0.0);
        o.at_most("density_vs_ep_forms", dens, 1e-10);
        // Approach: at |Ω| = 1e−7 the exact forms stay within O(|Ω|t) of the EP forms.
        let near = derive_quantities(&ModelParams::inverted_family(1e-7))?;
        let mut drift = 0.0f64;
        for kind in PacketKind::ALL {
            for t in [1.0, 10.0] {
                drift = drift.max((survival_probability(kind, near.kappa() * t) - 1.0).abs());
            }
        }
        o.at_most("near_ep_survival_drift_t10", drift, 1e-5);
        Ok(())
    })
    .finish(start, None)
}

/// Criterion 10: CSM–RHS equivalence at `θ = π/4`.
pub fn criterion_10(d: &DerivedQuantities) -> (CriterionOutcome, String) {
    let start = Instant::now();
    let mut law = String::from("not evaluated");
    let out = guarded(10, "CSM-RHS equivalence", |o| {
        let ts: Vec<f64> = [0.0, 0.5, 1.0, 2.0].iter().map(|v| v / d.kappa()).collect();
        let r = csm_rhs_equivalence_report(d, &ts, &[200.0, 2.0])?;
        for row in r.rows.iter().filter(|r| r.quantity != "survival") {
            let tol = if row.quantity.starts_with("field") { 1e-8 * row.csm } else { 1e-8 };
            o.at_most(format!("{}_t{:.3}", row.quantity, row.t), row.abs_diff, tol);
        }
        o.at_most("survival_ratio_law_deviation", r.survival.max_deviation, 1e-8);
        if r.survival.ratio_law == "inconsistent" {
            o.fail("survival ratio matches neither exp(-|Omega| t) nor 1");
        }
        o.notes.push(format!("survival ratio P_CSM/P_RHS = {}", r.survival.ratio_law));
        law = r.survival.ratio_law;
        Ok(())
    })
    .finish(start, None);
    (out, law)
}

/// Criterion 11: finite-difference residual of `H(θ)φ̃ₙ = Eₙφ̃ₙ`, `n ≤ 5`.
pub fn criterion_11(params: &ModelParams) -> CriterionOutcome {
    let start = Instant::now();
    guarded(11, "eigenfunction residual", |o| {
        let d = derive_quantities(params)?;
        let theta = FRAC_PI_4;
        let l = 5.0 / d.inv_length();
        for n in 0..=5 {
            let id = EigenstateId::new(n, Branch::Minus, Side::Tilde);
            let e = eigenvalue(id, &d).value;
            let f = |x: f64| eigenfunction(id, &d, theta, x).unwrap_or_default();
            let (mut num, mut den) = (0.0f64, 0.0f64);
            for k in 0..=100 {
                let x = -l + 2.0 * l * k as f64 / 100.0;
                let hf = apply_h_theta(&d, params.omega, theta, f, x, 1e-3);
                num = num.max((hf - e * f(x)).norm());
                den = den.max((e * f(x)).norm());
            }
            o.at_most(format!("residual_n{n}"), num / den, 1e-6);
        }
        Ok(())
    })
    .finish(start, None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub params: ModelParams,
    pub region: RegionClass,
    pub criteria: Vec<CriterionOutcome>,
    /// Constant phase of the eigenstate evolution as measured by quadrature.
    pub phase_verdict: Option<PhaseVerdict>,
    /// Survival ratio CSM/RHS as adjudicated by quadrature.
    pub survival_verdict: Option<String>,
    pub passed: bool,
}

/// Run every criterion that applies to `params`. Inverted-oscillator
/// parameters run the full suite; exceptional-point parameters run the EP
/// checks only; anything else is rejected.
pub fn run_conformance(params: &ModelParams) -> Result<ConformanceReport> {
    let region = classify_region(params, EP_TOLERANCE)?;
    let mut criteria = Vec::new();
    let (mut phase_verdict, mut survival_verdict) = (None, None);
    match region {
        RegionClass::OutOfScope => {
            let d = derive_quantities(params)?;
            d.require_inverted()?;
            unreachable!("classify_region and require_inverted disagree");
        }
        RegionClass::ExceptionalPoint => criteria.push(criterion_9(params)),
        RegionClass::InvertedOscillator => {
            let d = derive_quantities(params)?;
            criteria.push(criterion_1(&d));
            let (c2, pv) = criterion_2(&d);
            criteria.push(c2);
            phase_verdict = Some(pv);
            criteria.push(criterion_3());
            criteria.push(criterion_4(&d));
            criteria.push(criterion_5());
            criteria.push(criterion_6(&d));
            criteria.push(criterion_7());
            criteria.push(criterion_8(&d));
            criteria.push(criterion_9(&ep_params(params.omega)));
            let (c10, law) = criterion_10(&d);
            criteria.push(c10);
            survival_verdict = Some(law);
            criteria.push(criterion_11(params));
        }
    }
    let passed = criteria.iter().all(|c| c.passed);
    Ok(ConformanceReport { params: *params, region, criteria, phase_verdict, survival_verdict, passed })
}
