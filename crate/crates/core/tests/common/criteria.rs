//! One check per acceptance criterion. Each returns a short detail string on
//! success and the reason on failure.

use std::f64::consts::{FRAC_PI_2, PI};

use multiport::amplitude::{
    eigensystem_small, eigenspaces, Amplitude, ExactComplex, Matrix, Mode, MultiPhotonState, Occupation, PortLabel,
    Rational, Surd,
};
use multiport::bell::{
    cnot_table, full_truth_table, group_table, intermediate_expansion, raw_gate_product, BellKind, BellLabel,
    GateLayout, HeraldKind, TruthTable,
};
use multiport::device::{
    compare_up_to_global_phase, exit_record, grover_coin, steady_state, transfer_matrix, symmetric_unitary, three_port_closed_form,
    MultiportSpec,
};
use multiport::feasibility::{assess, coherence_budget, FeasibilityInputs, Pulse};
use multiport::walk::{build_network, run_walk_from_lead, GraphSpec, VertexKind};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{c, dihedral_defect, reference_truth_table, reference_psi_plus_row, random_identical_spec, random_spec, two_vertex_graph, DenseTwoVertex};

pub type Check = Result<String, String>;
type E = ExactComplex;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<T: std::fmt::Display>(e: T) -> String {
    e.to_string()
}

/// `(num/den)·√radical` in exact mode.
pub fn surd(num: i128, den: i128, radical: u32) -> E {
    E::real(Surd::radical(Rational::new(num, den), radical).expect("supported radical"))
}

fn i_over(num: i128, den: i128) -> E {
    E::ratio(0, num, den)
}

fn occ(modes: &[Mode]) -> Occupation {
    Occupation::new(modes.iter().copied())
}

pub fn closed_form_exact() -> Matrix<E> {
    three_port_closed_form::<E>()
}

pub fn truth_table_exact() -> TruthTable<E> {
    full_truth_table(PortLabel::A, &closed_form_exact()).expect("truth table")
}

pub fn default_steady() -> Result<multiport::device::SteadyStateResult, String> {
    steady_state(&MultiportSpec::new(3), 1e-12).map_err(err)
}

// 1 ─────────────────────────────────────────────────────────────────────────
pub fn exit_table() -> Check {
    let rec = exit_record::<E>(&MultiportSpec::new(3), PortLabel::A, 10).map_err(err)?;
    let expected: [(usize, [E; 3], E); 5] = [
        (2, [E::zero(), i_over(1, 2), i_over(1, 2)], E::from_ratio(1, 2)),
        (4, [i_over(-1, 2), i_over(1, 4), i_over(1, 4)], E::from_ratio(7, 8)),
        (6, [i_over(1, 4), i_over(-1, 8), i_over(-1, 8)], E::from_ratio(31, 32)),
        (8, [i_over(-1, 8), i_over(1, 16), i_over(1, 16)], E::from_ratio(127, 128)),
        (10, [i_over(1, 16), i_over(-1, 32), i_over(-1, 32)], E::from_ratio(511, 512)),
    ];
    let rounded_reference = [0.5, 0.875, 0.96875, 0.99219, 0.99805];
    for ((n, amps, cum), reference) in expected.iter().zip(rounded_reference) {
        let row = rec.row(*n).ok_or(format!("missing N={n}"))?;
        ensure(row.amplitudes == amps.to_vec(), || format!("N={n}: amplitudes {:?}", row.amplitudes))?;
        ensure(&row.cumulative == cum, || format!("N={n}: cumulative {}", row.cumulative))?;
        let rounded = (row.cumulative.re_f64() * 1e5).round() / 1e5;
        ensure(rounded == reference, || format!("N={n}: cumulative rounds to {rounded}, expected {reference}"))?;
    }
    for n in (1..=9).step_by(2) {
        let row = rec.row(n).ok_or(format!("missing N={n}"))?;
        ensure(row.amplitudes.iter().all(|a| *a == E::zero()), || format!("N={n}: odd row not zero"))?;
    }
    ensure(rec.conserves_exactly(), || "probability not exactly conserved".into())?;
    Ok("N = 2..10 exact; odd rows zero".into())
}

// 2 ─────────────────────────────────────────────────────────────────────────
pub const STEADY_STEP_LIMIT: usize = 40;

pub fn steady_u() -> Check {
    let ss = default_steady()?;
    let dev = ss.matrix.max_deviation(&closed_form_exact().to_c64());
    ensure(ss.converged, || format!("not converged: residual {:.3e}", ss.residual))?;
    ensure(dev < 1e-9, || format!("deviation {dev:.3e} from closed form"))?;
    ensure(ss.residual < 1e-12, || format!("residual {:.3e}", ss.residual))?;
    ensure(ss.steps_used <= STEADY_STEP_LIMIT, || {
        format!(
            "residual {:.2e} reached after {} encounters, not within {STEADY_STEP_LIMIT} (deviation {dev:.1e})",
            ss.residual, ss.steps_used
        )
    })?;
    Ok(format!("deviation {dev:.1e}, {} steps", ss.steps_used))
}

// 3 ─────────────────────────────────────────────────────────────────────────
pub fn closed_form() -> Check {
    let ss = default_steady()?;
    let dev = symmetric_unitary(-FRAC_PI_2, 0.0).max_deviation(&ss.matrix);
    ensure(dev < 1e-12, || format!("family member differs from steady state by {dev:.3e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (pa, p) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
        worst = worst.max(symmetric_unitary(pa, p).unitarity_deviation());
    }
    ensure(worst < 1e-12, || format!("unitarity deviation {worst:.3e}"))?;
    Ok(format!("deviation {dev:.1e}; worst unitarity {worst:.1e} over 100 samples"))
}

// 4 ─────────────────────────────────────────────────────────────────────────
pub fn eigenstructure() -> Check {
    let u = default_steady()?.matrix;
    let pairs = eigensystem_small(&u).map_err(err)?;
    let spaces = eigenspaces(&pairs, 1e-8);
    let plus = spaces.iter().find(|s| (s.value - c(0.0, 1.0)).norm() < 1e-9).ok_or("no +i eigenvalue")?;
    let minus = spaces.iter().find(|s| (s.value - c(0.0, -1.0)).norm() < 1e-9).ok_or("no −i eigenvalue")?;
    ensure(plus.multiplicity() == 1, || format!("+i multiplicity {}", plus.multiplicity()))?;
    ensure(minus.multiplicity() == 2, || format!("−i multiplicity {}", minus.multiplicity()))?;
    let v = plus.basis[0].amplitudes();
    let overlap: Complex64 = v.iter().map(|a| a / 3f64.sqrt()).sum();
    ensure((overlap.norm() - 1.0).abs() < 1e-9, || format!("+i vector overlap with uniform {:.3e}", overlap.norm()))?;
    let sq = u.matmul(&u).map_err(err)?;
    let dev = sq.max_deviation(&Matrix::identity(3).scale(&c(-1.0, 0.0)));
    ensure(dev < 1e-12, || format!("U² + I = {dev:.3e}"))?;
    Ok(format!("+i on uniform, −i twofold, U² = −I to {dev:.1e}"))
}

// 5 ─────────────────────────────────────────────────────────────────────────
pub fn grover() -> Check {
    let u = default_steady()?.matrix;
    let m = compare_up_to_global_phase(&u, &grover_coin(3).map_err(err)?, 1e-12).map_err(err)?;
    ensure(m.matches, || format!("deviation {:.3e}", m.max_deviation))?;
    ensure((m.phase - c(0.0, 1.0)).norm() < 1e-12, || format!("phase {}", m.phase))?;
    Ok(format!("phase i, deviation {:.1e}", m.max_deviation))
}

// 6 ─────────────────────────────────────────────────────────────────────────
fn bell_coefficient(s: &MultiPhotonState<E>, p: PortLabel, q: PortLabel) -> Result<E, String> {
    // Ψ+_pq = (H_p V_q + V_p H_q)/√2, so each term carries coefficient/√2.
    let hv = s.amplitude(&occ(&[Mode::h(p), Mode::v(q)]));
    let vh = s.amplitude(&occ(&[Mode::v(p), Mode::h(q)]));
    ensure(hv == vh, || format!("{p}{q} component is not Ψ+"))?;
    Ok(hv.mul(&E::sqrt_int(2).unwrap()))
}

/// Coefficients on |HV⟩_A, |HV⟩_B, |HV⟩_C, Ψ+_AB, Ψ+_AC, Ψ+_BC.
pub fn intermediate_coefficients(u: &Matrix<E>) -> Result<[E; 6], String> {
    use multiport::amplitude::PortLabel as P;
    let label = BellLabel::new(BellKind::PSI_PLUS, P::A, P::B).map_err(err)?;
    let s = intermediate_expansion(label, u).map_err(err)?;
    let hv = |p| s.amplitude(&occ(&[Mode::h(p), Mode::v(p)]));
    let coeffs = [
        hv(P::A),
        hv(P::B),
        hv(P::C),
        bell_coefficient(&s, P::A, P::B)?,
        bell_coefficient(&s, P::A, P::C)?,
        bell_coefficient(&s, P::B, P::C)?,
    ];
    // the six components are orthonormal, so a unit sum leaves nothing else
    let mut weight = E::zero();
    for k in &coeffs {
        weight += Amplitude::abs_sqr(k);
    }
    ensure(weight == E::one(), || "coefficients do not exhaust the state".into())?;
    Ok(coeffs)
}

pub fn expected_intermediate() -> [E; 6] {
    [surd(-2, 9, 2), surd(-2, 9, 2), surd(4, 9, 2), E::from_ratio(5, 9), E::from_ratio(2, 9), E::from_ratio(2, 9)]
}

/// `(α, β)` with the one-photon-at-B-and-C sector of the raw product equal to
/// `α |HV⟩_A Ψ+_BC + β Ψ+_AC Ψ+_AB`.
pub fn structure_coefficients(u: &Matrix<E>) -> Result<(E, E), String> {
    use multiport::amplitude::PortLabel as P;
    let layout = GateLayout::new(P::A).map_err(err)?;
    let raw = raw_gate_product(BellKind::PSI_PLUS, BellKind::PSI_PLUS, &layout, u).map_err(err)?;
    let sector: Vec<(Occupation, E)> = raw
        .terms()
        .filter(|(o, _)| o.count_at(P::A) == 2 && o.count_at(P::B) == 1 && o.count_at(P::C) == 1)
        .map(|(o, a)| (o.clone(), a.clone()))
        .collect();
    let amp = |m: &[Mode]| raw.amplitude(&occ(m));
    let r2 = E::sqrt_int(2).unwrap();
    let half = E::from_ratio(1, 2);
    // Ψ+_AC Ψ+_AB puts √2/2 on |2H⟩_A|V⟩_B|V⟩_C and 1/2 on |HV⟩_A|H⟩_B|V⟩_C.
    let beta = amp(&[Mode::h(P::A), Mode::h(P::A), Mode::v(P::B), Mode::v(P::C)]).mul(&r2);
    let mixed = amp(&[Mode::h(P::A), Mode::v(P::A), Mode::h(P::B), Mode::v(P::C)]);
    let alpha = (mixed - beta.mul(&half)).mul(&r2);
    let model = [
        ([Mode::h(P::A), Mode::h(P::A), Mode::v(P::B), Mode::v(P::C)], beta.mul(&r2).mul(&half)),
        ([Mode::v(P::A), Mode::v(P::A), Mode::h(P::B), Mode::h(P::C)], beta.mul(&r2).mul(&half)),
        ([Mode::h(P::A), Mode::v(P::A), Mode::h(P::B), Mode::v(P::C)], alpha.mul(&r2).mul(&half) + beta.mul(&half)),
        ([Mode::h(P::A), Mode::v(P::A), Mode::v(P::B), Mode::h(P::C)], alpha.mul(&r2).mul(&half) + beta.mul(&half)),
    ];
    for (modes, a) in &model {
        ensure(amp(modes) == *a, || format!("sector term {} off the two-parameter form", occ(modes)))?;
    }
    ensure(sector.len() == model.len(), || format!("sector has {} terms, expected 4", sector.len()))?;
    Ok((alpha, beta))
}

pub fn expansion_coefficients() -> Check {
    let u = closed_form_exact();
    let expected = expected_intermediate();
    let got = intermediate_coefficients(&u)?;
    let negated: Vec<E> = expected.iter().map(|k| -k.clone()).collect();
    ensure(got.to_vec() == negated, || format!("closed-form U gives {got:?}"))?;
    // the reference set uses the representative of U with real entries, i·U
    let real_u = u.scale(&E::i());
    let literal = intermediate_coefficients(&real_u)?;
    ensure(literal == expected, || format!("i·U gives {literal:?}"))?;
    let (alpha, beta) = structure_coefficients(&u)?;
    ensure(alpha == surd(-8, 81, 2), || format!("α = {alpha}"))?;
    ensure(beta == E::from_ratio(29, 81), || format!("β = {beta}"))?;
    Ok("coefficient set exact (global phase −1 for the closed form); α = −8√2/81, β = 29/81".into())
}

// 7 ─────────────────────────────────────────────────────────────────────────
pub fn truth_table() -> Check {
    let table = truth_table_exact();
    for (input, control, s, o) in reference_truth_table() {
        let row = table.row(input, control).ok_or(format!("missing row {input} {control}"))?;
        ensure(row.out_s == Some(s) && row.out_o == Some(o), || {
            format!("{input} ⊗ {control}: got ({:?}, {:?}), expected ({s}, {o})", row.out_s, row.out_o)
        })?;
    }
    let restriction = table.restriction(BellKind::PSI_PLUS, HeraldKind::S);
    let reference: Vec<(BellKind, Option<BellKind>)> = reference_psi_plus_row().into_iter().map(|(k, o)| (k, Some(o))).collect();
    ensure(restriction == reference, || format!("Ψ+ restriction {restriction:?}"))?;
    let cnot = cnot_table(&table);
    ensure(cnot.len() == 4 && cnot.iter().all(|r| r.is_correct()), || format!("CNOT table {cnot:?}"))?;
    Ok("16/16 rows; Ψ+ restriction; CNOT correct".into())
}

// 8 ─────────────────────────────────────────────────────────────────────────
pub fn klein() -> Check {
    let table = truth_table_exact();
    let (s, rs) = group_table(&table, HeraldKind::S);
    let (o, ro) = group_table(&table, HeraldKind::O);
    ensure(rs.holds(), || format!("s violations {:?}", rs.violations))?;
    ensure(ro.holds(), || format!("o violations {:?}", ro.violations))?;
    ensure(rs.isomorphism.is_some(), || "no Z2⊕Z2 map".into())?;
    ensure(o.same_products(&s.family_swapped()), || "o table is not the Ψ↔Φ relabeling of s".into())?;
    Ok(format!("identity s: {}, o: {}", rs.identity.unwrap(), ro.identity.unwrap()))
}

// 9 ─────────────────────────────────────────────────────────────────────────
pub const O_BAND: (f64, f64) = (0.01, 0.06);

pub fn success_probability() -> Check {
    let table = truth_table_exact();
    let row = table.row(BellKind::PSI_PLUS, BellKind::PSI_PLUS).ok_or("missing (Ψ+, Ψ+)")?;
    ensure(row.prob_o == E::from_ratio(169, 19683), || format!("prob_o = {}", row.prob_o))?;
    ensure(row.prob_s == E::from_ratio(1682, 19683), || format!("prob_s = {}", row.prob_s))?;
    ensure(row.coherent_s == E::from_ratio(841, 19683), || format!("coherent_s = {}", row.coherent_s))?;
    let p = row.prob_o.re_f64();
    ensure(p >= O_BAND.0 && p <= O_BAND.1, || {
        format!(
            "o-branch probability 169/19683 = {p:.5} below [{}, {}]; s-branch coherent {:.4}",
            O_BAND.0,
            O_BAND.1,
            row.coherent_s.re_f64()
        )
    })?;
    Ok(format!("o = {p:.5}"))
}

// 10 ────────────────────────────────────────────────────────────────────────
pub const RANDOM_SPECS: usize = 200;

pub fn conservation_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut worst_step, mut worst_unit, mut worst_dihedral): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut worst_direct: f64 = 0.0;
    let mut slow = 0;
    for k in 0..RANDOM_SPECS {
        let n = 3 + k % 3;
        let identical = k % 4 == 0;
        let spec = if identical { random_identical_spec(&mut rng, n) } else { random_spec(&mut rng, n) }.with_max_steps(4000);
        for input in 0..n {
            let rec = exit_record::<Complex64>(&spec, PortLabel(input), 60).map_err(err)?;
            worst_step = worst_step.max(rec.conservation_defect());
        }
        let ss = steady_state(&spec, 1e-13).map_err(err)?;
        let bound = ss.residual.max(1e-9);
        let dev = ss.matrix.unitarity_deviation();
        ensure(dev <= bound, || format!("spec {k}: unitarity {dev:.3e} > {bound:.3e}"))?;
        worst_unit = worst_unit.max(dev);
        slow += usize::from(!ss.converged);
        // near-trapped internal modes decay slowly; the direct solve is unaffected
        let direct = transfer_matrix(&spec).map_err(err)?;
        worst_direct = worst_direct.max(direct.unitarity_deviation());
        if ss.converged {
            let gap = direct.max_deviation(&ss.matrix);
            ensure(gap < 1e-9, || format!("spec {k}: stepping and direct solve differ by {gap:.3e}"))?;
        }
        if identical {
            let d = dihedral_defect(&ss.matrix);
            ensure(d < 1e-9, || format!("spec {k}: dihedral defect {d:.3e}"))?;
            worst_dihedral = worst_dihedral.max(d);
        }
    }
    ensure(worst_step < 1e-12, || format!("conservation defect {worst_step:.3e}"))?;
    ensure(worst_direct < 1e-12, || format!("direct transfer unitarity {worst_direct:.3e}"))?;
    Ok(format!(
        "{RANDOM_SPECS} specs: step defect {worst_step:.1e}, unitarity {worst_unit:.1e} \
         ({slow} slow to converge, direct solve {worst_direct:.1e}), dihedral {worst_dihedral:.1e}"
    ))
}

// 11 ────────────────────────────────────────────────────────────────────────
pub fn cross_module() -> Check {
    let spec = MultiportSpec::new(3);
    let engine = build_network::<E>(&GraphSpec::single(VertexKind::Physical { spec: spec.clone() })).map_err(err)?;
    for input in 0..3 {
        let rec = exit_record::<E>(&spec, PortLabel(input), 20).map_err(err)?;
        let run = run_walk_from_lead(&engine, input, 20, None).map_err(err)?;
        for (row, step) in rec.rows.iter().zip(&run.steps) {
            ensure(row.amplitudes == step.lead_amplitudes, || format!("input {input}, N={}", row.n))?;
        }
    }
    let dense = DenseTwoVertex::new();
    let engine = build_network::<Complex64>(&two_vertex_graph()).map_err(err)?;
    let mut worst: f64 = 0.0;
    for lead in 0..4 {
        let oracle = dense.run(lead, 40);
        let run = run_walk_from_lead(&engine, lead, 40, None).map_err(err)?;
        for ((exits, bridge, internal), step) in oracle.iter().zip(&run.steps) {
            for (a, b) in exits.iter().zip(&step.lead_amplitudes) {
                worst = worst.max((a - b).norm());
            }
            worst = worst.max((bridge - step.edge_probabilities[0].re).abs());
            worst = worst.max((internal - step.internal.re).abs());
        }
    }
    ensure(worst < 1e-12, || format!("two-vertex deviation {worst:.3e}"))?;
    Ok(format!("single vertex exact for N ≤ 20; two-vertex deviation {worst:.1e}"))
}

// 12 ────────────────────────────────────────────────────────────────────────
fn within(x: f64, target: f64, frac: f64) -> bool {
    ((x - target) / target).abs() <= frac
}

pub fn feasibility_numbers() -> Check {
    let b = assess(&FeasibilityInputs::new(1e-4)).map_err(err)?;
    ensure(within(b.t_clock, 3.3e-12, 0.02), || format!("T_c = {:.4e}", b.t_clock))?;
    ensure(within(b.max_sampling_rate, 0.3e12, 0.02), || format!("rate = {:.4e}", b.max_sampling_rate))?;
    let p = assess(&FeasibilityInputs::new(1e-4).with_pulse(Pulse::Duration(100e-12))).map_err(err)?;
    let delta_nu = p.delta_nu.ok_or("no bandwidth for a finite pulse")?;
    ensure(within(delta_nu, 1e9, 0.25), || format!("Δν = {delta_nu:.4e}"))?;
    ensure(within(p.l_coh, 0.30, 0.30), || format!("l_coh = {:.4}", p.l_coh))?;
    let budget = coherence_budget(1e-9, 3.3e-12).map_err(err)?;
    ensure(budget.max_steps == Some(303), || format!("budget {:?}", budget.max_steps))?;
    Ok(format!(
        "T_c {:.3} ps, Δν {:.3} GHz, l_coh {:.3} m, budget 303",
        b.t_clock * 1e12,
        delta_nu * 1e-9,
        p.l_coh
    ))
}

pub type Criterion = (usize, &'static str, fn() -> Check);

pub const CRITERIA: [Criterion; 12] = [
    (1, "exit record table, exact", exit_table),
    (2, "steady-state transition matrix", steady_u),
    (3, "closed-form family consistency", closed_form),
    (4, "eigenstructure and U² = −I", eigenstructure),
    (5, "Grover equivalence", grover),
    (6, "two-photon expansion coefficients", expansion_coefficients),
    (7, "Bell truth table and CNOT", truth_table),
    (8, "Klein group structure", klein),
    (9, "heralded success probability band", success_probability),
    (10, "randomized conservation suite", conservation_suite),
    (11, "cross-module oracle", cross_module),
    (12, "feasibility numbers", feasibility_numbers),
];

/// Criteria that cannot hold simultaneously with the rest of the model.
pub const KNOWN_UNATTAINABLE: [(usize, &str); 2] = [
    (2, "a residual below 1e-12 needs 82 encounters; the tail norm halves every two"),
    (9, "exact o-branch probability is 169/19683 ≈ 0.0086"),
];
