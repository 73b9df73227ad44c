//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use pidkit::game::{run_stake_game, StakeGameSpec};
use pidkit::registry;
use pidkit::sweep::{gaussian_default_grid, gaussian_sweep_parallel, predpred_sweep, step_grid};
use pidkit_core::dist::Marginals;
use pidkit_core::gaussian::GaussianSweep;
use pidkit_core::lattice::moebius_inversion;
use pidkit_core::measures::{broja_redundancy, iccs, iccs_sources, imin, pid};
use pidkit_core::optim::maxent_under_marginals;
use pidkit_core::{
    Antichain, AxisSet, ConstraintSet, GaussianSystem, IccsVariant, JointDistribution, McOptions, MeasureChoice,
    PidResult, RedundancyLattice, SolverOptions, Source,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

const ICCS: MeasureChoice = MeasureChoice::Iccs(IccsVariant::Game);
const TWO_NODES: [&str; 4] = ["{1}{2}", "{1}", "{2}", "{12}"];

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn example(name: &str) -> Result<JointDistribution, String> {
    registry::build(name).map_err(|e| format!("{name}: {e}"))
}

fn decompose(name: &str, m: MeasureChoice) -> Result<PidResult, String> {
    pid(&example(name)?, m, &opts()).map_err(|e| format!("{name}/{m}: {e}"))
}

fn close(label: &str, got: f64, want: f64, tol: f64) -> Check {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{label}: got {got:.6}, want {want} (tol {tol:e})"))
    }
}

fn atoms(label: &str, r: &PidResult, nodes: &[&str], want: &[f64], tol: f64) -> Check {
    for (node, &w) in nodes.iter().zip(want) {
        let got = r.atom(node).ok_or_else(|| format!("{label}: no node {node}"))?;
        close(&format!("{label} {node}"), got, w, tol)?;
    }
    Ok(())
}

fn two(name: &str, m: MeasureChoice, want: [f64; 4], tol: f64) -> Check {
    atoms(&format!("{name}/{m}"), &decompose(name, m)?, &TWO_NODES, &want, tol)
}

fn and_or() -> Check {
    for name in ["and", "or"] {
        two(name, ICCS, [0.10, 0.21, 0.21, 0.29], 0.005)?;
        two(name, MeasureChoice::Imin, [0.31, 0.0, 0.0, 0.5], 0.005)?;
        two(name, MeasureChoice::Broja, [0.31, 0.0, 0.0, 0.5], 0.005)?;
    }
    for m in [ICCS, MeasureChoice::Imin, MeasureChoice::Broja] {
        let (a, o) = (decompose("and", m)?, decompose("or", m)?);
        for (x, y) in a.ipartial.iter().zip(&o.ipartial) {
            close(&format!("and vs or/{m}"), *x, *y, 1e-9)?;
        }
    }
    Ok(())
}

fn sum() -> Check {
    two("sum", ICCS, [0.0, 0.5, 0.5, 0.5], 1e-6)?;
    two("sum", MeasureChoice::Broja, [0.5, 0.0, 0.0, 1.0], 1e-6)?;
    let ev = broja_redundancy(&example("sum")?, &opts()).map_err(|e| e.to_string())?;
    let q = ev.distribution.marginal_table(AxisSet::from_axes([0, 1])).map_err(|e| e.to_string())?;
    close("sum optimum Q(0,0)", q[0], 0.5, 1e-6)?;
    close("sum optimum Q(1,1)", q[3], 0.5, 1e-6)
}

fn three_outcome_system() -> Check {
    two("wb-a", ICCS, [0.3900, 0.5283, 0.5283, 0.1383], 5e-4)?;
    two("wb-a", MeasureChoice::Imin, [0.5850, 0.3333, 0.3333, 0.3333], 5e-4)?;
    two("wb-a", MeasureChoice::Broja, [0.2516, 0.6667, 0.6667, 0.0], 5e-4)
}

fn four_and_six_outcome_systems() -> Check {
    two("wb-b", ICCS, [0.0, 0.5, 1.0, 0.0], 0.005)?;
    two("wb-c", ICCS, [0.0, 0.0, 0.25, 0.67], 0.005)
}

fn reduced_or() -> Check {
    two("reducedor", ICCS, [0.0, 0.31, 0.31, 0.38], 0.005)?;
    two("reducedor", MeasureChoice::Imin, [0.31, 0.0, 0.0, 0.69], 0.005)?;
    two("reducedor", MeasureChoice::Broja, [0.31, 0.0, 0.0, 0.69], 0.005)
}

fn unique_misinformation() -> Check {
    let r = decompose("uniquemis", ICCS)?;
    atoms("uniquemis", &r, &TWO_NODES, &[0.77, 0.23, -0.16, 0.16], 0.005)?;
    let unq2 = r.atom("{2}").unwrap();
    if unq2 >= 0.0 {
        return Err(format!("unique atom of X2 is {unq2}, expected negative"));
    }
    let d = example("uniquemis")?;
    let i2 = d.mutual_information(AxisSet::single(1), AxisSet::single(2)).map_err(|e| e.to_string())?;
    let red = r.redundancy("{1}{2}").unwrap();
    if red <= i2 {
        return Err(format!("redundancy {red} does not exceed I(S;X2) = {i2}"));
    }
    Ok(())
}

fn pointwise_tables() -> Check {
    // (outcome, dh(x1), dh(x2), dh(x1,x2), c, dh_com)
    type Row = ([usize; 3], [f64; 5]);
    let goldens: [(&str, &[Row]); 3] = [
        ("rdn", &[([0, 0, 0], [1.0, 1.0, 1.0, 1.0, 1.0]), ([1, 1, 1], [1.0, 1.0, 1.0, 1.0, 1.0])]),
        (
            "sum",
            &[
                ([0, 0, 0], [1.0, 1.0, 2.0, 0.0, 0.0]),
                ([0, 1, 1], [0.0, 0.0, 1.0, -1.0, 0.0]),
                ([1, 0, 1], [0.0, 0.0, 1.0, -1.0, 0.0]),
                ([1, 1, 2], [1.0, 1.0, 2.0, 0.0, 0.0]),
            ],
        ),
        (
            "and",
            &[
                ([0, 0, 0], [0.415, 0.415, 0.415, 0.415, 0.415]),
                ([0, 1, 0], [0.415, -0.585, 0.415, -0.585, 0.0]),
                ([1, 0, 0], [-0.585, 0.415, 0.415, -0.585, 0.0]),
                ([1, 1, 1], [1.0, 1.0, 2.0, 0.0, 0.0]),
            ],
        ),
    ];
    let node = Antichain::parse("{1}{2}").unwrap();
    for (name, rows) in goldens {
        let ev = iccs(&example(name)?, &node, IccsVariant::Game, &opts()).map_err(|e| e.to_string())?;
        if ev.table.rows.len() != rows.len() {
            return Err(format!("{name}: {} rows, want {}", ev.table.rows.len(), rows.len()));
        }
        for (outcome, want) in rows {
            let row = ev.table.row(outcome).ok_or_else(|| format!("{name}: missing row {outcome:?}"))?;
            let got = [row.source_deltas[0], row.source_deltas[1], row.joint_delta, row.coinformation, row.common];
            for (g, w) in got.iter().zip(want) {
                close(&format!("{name} {outcome:?}"), *g, *w, 5e-4)?;
            }
        }
    }
    Ok(())
}

fn rdn_xor_systems() -> Check {
    two("rdnxor", ICCS, [1.0, 0.0, 0.0, 1.0], 1e-9)?;
    two("rdnunqxor", ICCS, [1.0, 1.0, 1.0, 1.0], 1e-9)?;
    let r = decompose("rdnunqxor", ICCS)?;
    for (node, want) in TWO_NODES.iter().zip([1.0, 2.0, 2.0, 4.0]) {
        close(&format!("rdnunqxor I_cap {node}"), r.redundancy(node).unwrap(), want, 1e-9)?;
    }
    Ok(())
}

/// Checks the listed atoms and that every other atom is zero.
fn only_atoms(name: &str, want: &[(&str, f64)]) -> Check {
    let r = decompose(name, ICCS)?;
    for (node, atom) in r.node_names().iter().zip(&r.ipartial) {
        let w = want.iter().find(|(n, _)| n == node).map_or(0.0, |&(_, v)| v);
        close(&format!("{name} {node}"), *atom, w, 1e-9)?;
    }
    Ok(())
}

fn three_predictor_goldens() -> Check {
    only_atoms("giantbit", &[("{1}{2}{3}", 1.0)])?;
    only_atoms("parity3", &[("{123}", 1.0)])?;
    only_atoms("xorunq", &[("{3}", 1.0), ("{12}", 1.0)])?;
    only_atoms("dblxor", &[("{12}", 1.0), ("{13}", 1.0), ("{23}", 1.0), ("{123}", -1.0)])?;
    close("dblxor I_cap {123}", decompose("dblxor", ICCS)?.redundancy("{123}").unwrap(), 2.0, 1e-9)?;
    only_atoms("xorcopy", &[("{1}{23}", 1.0), ("{2}{13}", 1.0), ("{3}{12}", 1.0), ("{12}{13}{23}", -1.0)])
}

fn and_duplicate_consistency() -> Check {
    let and = decompose("and", ICCS)?;
    let dup = decompose("anddup", ICCS)?;
    let a = |n: &str| and.atom(n).unwrap();
    let d = |n: &str| dup.atom(n).unwrap();
    close("anddup {2} vs and {2}", d("{2}"), a("{2}"), 1e-6)?;
    close("anddup {1}{3} vs and {1}", d("{1}{3}"), a("{1}"), 1e-6)?;
    close("anddup {1}{2}{3} vs and {1}{2}", d("{1}{2}{3}"), a("{1}{2}"), 1e-6)?;
    let five = d("{12}") + d("{12}{13}") + d("{12}{23}") + d("{12}{13}{23}") + d("{3}{12}");
    close("and {12} vs anddup synergy sum", five, a("{12}"), 1e-6)
}

fn predpred_sweep_trends() -> Check {
    let grid = step_grid(-0.8, 0.1, 0.2).map_err(|e| e.to_string())?;
    let rows = predpred_sweep(&grid, &[ICCS, MeasureChoice::Broja], &opts()).map_err(|e| e.to_string())?;
    // redundancy and unique atoms; synergy tracks the joint MI, which moves with c
    let first = &rows[0].results[1].ipartial;
    for row in &rows {
        for (x, y) in row.results[1].ipartial[..3].iter().zip(first) {
            close(&format!("broja atom at c={}", row.c), *x, *y, 1e-6)?;
        }
        let optimum = broja_redundancy(&registry::predpred(row.c).map_err(|e| e.to_string())?, &opts())
            .map_err(|e| e.to_string())?
            .distribution;
        let q = optimum.marginal_table(AxisSet::from_axes([0, 1])).map_err(|e| e.to_string())?;
        for (k, want) in [0.5, 0.0, 0.0, 0.5].into_iter().enumerate() {
            close(&format!("coupled optimum at c={}", row.c), q[k], want, 1e-6)?;
        }
    }
    for w in rows.windows(2) {
        let (lo, hi) = (&w[0].results[0], &w[1].results[0]);
        if hi.ipartial[0] < lo.ipartial[0] - 1e-12 {
            return Err(format!("iccs redundancy falls between c={} and c={}", w[0].c, w[1].c));
        }
        for k in [1, 2] {
            if hi.ipartial[k] > lo.ipartial[k] + 1e-12 {
                return Err(format!("iccs unique atom {k} rises between c={} and c={}", w[0].c, w[1].c));
            }
        }
    }
    Ok(())
}

fn gaussian_family(a: f64, c: f64, mc: &McOptions) -> Result<GaussianSweep, String> {
    let grid = gaussian_default_grid(a, c, 9);
    let sweep = gaussian_sweep_parallel(a, c, &grid, mc).map_err(|e| e.to_string())?;
    if sweep.rows.len() != 9 {
        return Err(format!("a={a} c={c}: {} of 9 grid points feasible", sweep.rows.len()));
    }
    for row in &sweep.rows {
        let sys = GaussianSystem::new(a, row.b, c).map_err(|e| e.to_string())?;
        let exact = sys.joint_mi().map_err(|e| e.to_string())?;
        let se = row.iccs.icap_standard_errors.as_ref().ok_or("missing standard errors")?[3];
        let sum = row.iccs.atom_sum();
        if (sum - exact).abs() > 3.0 * se {
            return Err(format!("a={a} c={c} b={:.4}: atom sum {sum:.5} vs {exact:.5}, se {se:.2e}", row.b));
        }
        // I_mmi: the weaker source carries no unique information
        let weaker = if a.abs() <= c.abs() { "{1}" } else { "{2}" };
        let u = row.immi.atom(weaker).unwrap();
        if u != 0.0 {
            return Err(format!("a={a} c={c} b={:.4}: immi weaker unique atom {u}", row.b));
        }
    }
    let low = &sweep.rows[0];
    let red = low.iccs.atom("{1}{2}").unwrap();
    if red >= 0.02 {
        return Err(format!("a={a} c={c} b={:.4}: iccs redundancy {red:.4} at the lowest b", low.b));
    }
    Ok(sweep)
}

fn gaussian() -> Check {
    let mc = McOptions { sample_count: 1_000_000, seed: 0, report_standard_error: true };
    let symmetric = gaussian_family(0.5, 0.5, &mc)?;
    let top = symmetric.rows.last().unwrap();
    for node in ["{1}", "{2}"] {
        let u = top.iccs.atom(node).unwrap();
        if u.abs() >= 0.02 {
            return Err(format!("a=c=0.5 b={:.4}: unique atom {node} = {u:.4}", top.b));
        }
    }
    // with a != c the top of the feasible range is a singular covariance
    // (S a linear function of X1, X2), not duplicated predictors, so the
    // vanishing-unique limit only applies to the symmetric family
    gaussian_family(0.4, 0.6, &mc)?;
    Ok(())
}

fn stake_game() -> Check {
    let truth = run_stake_game(&StakeGameSpec { distribution: example("reducedor")? }).map_err(|e| e.to_string())?;
    for setter in [1, 2] {
        if truth.advantage(setter) <= 0.0 {
            return Err(format!("setter {setter} has advantage {}", truth.advantage(setter)));
        }
    }
    let optimum = broja_redundancy(&example("reducedor")?, &opts()).map_err(|e| e.to_string())?.distribution;
    let fair = run_stake_game(&StakeGameSpec { distribution: optimum }).map_err(|e| e.to_string())?;
    for setter in [1, 2] {
        close(&format!("optimised game, setter {setter}"), fair.advantage(setter), 0.0, 1e-12)?;
    }
    Ok(())
}

/// Random two-predictor system over binary/ternary alphabets; roughly one
/// cell in six is zero.
fn random_system(rng: &mut ChaCha8Rng, n_pred: usize) -> JointDistribution {
    let cards: Vec<usize> = (0..=n_pred).map(|_| rng.random_range(2..=3)).collect();
    let size: usize = cards.iter().product();
    loop {
        let mut p: Vec<f64> = (0..size).map(|_| if rng.random_bool(1.0 / 6.0) { 0.0 } else { rng.random::<f64>() }).collect();
        let total: f64 = p.iter().sum();
        if total > 0.0 {
            p.iter_mut().for_each(|x| *x /= total);
            return JointDistribution::new(cards, p, Some(n_pred)).expect("normalised");
        }
    }
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let o = opts();
    let e = |err: pidkit_core::Error| err.to_string();
    let s = |m: &[usize]| Source::new(m).unwrap();
    for case in 0..120 {
        let d = random_system(&mut rng, 2);
        let tag = format!("system {case}");
        let (x1, x2, t) = (AxisSet::single(0), AxisSet::single(1), AxisSet::single(2));
        let mi1 = d.mutual_information(x1, t).map_err(e)?;

        // self-redundancy
        let own = iccs(&d, &Antichain::new(vec![s(&[1])]).unwrap(), IccsVariant::Game, &o).map_err(e)?;
        close(&format!("{tag} self-redundancy iccs"), own.value, mi1, 1e-9)?;
        close(&format!("{tag} self-redundancy imin"), imin(&d, &Antichain::parse("{1}").unwrap()).map_err(e)?, mi1, 1e-9)?;

        // symmetry under swapping the predictors
        let r = pid(&d, ICCS, &o).map_err(e)?;
        let swapped = pid(&d.permute_axes(&[1, 0, 2]).map_err(e)?, ICCS, &o).map_err(e)?;
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            close(&format!("{tag} symmetry"), r.ipartial[i], swapped.ipartial[j], 1e-8)?;
        }

        // subset equality
        let sub = iccs_sources(&d, &[s(&[1]), s(&[1, 2])], IccsVariant::Game, &o).map_err(e)?;
        close(&format!("{tag} subset equality"), sub.value, mi1, 1e-9)?;
        let x12 = x1.union(x2);
        let mut m = Marginals::new(&d);
        for (outcome, _) in d.support() {
            let three = m.local_coinformation(&[x1, x12, t], &outcome).map_err(e)?;
            let pair = m.local_coinformation(&[x1, t], &outcome).map_err(e)?;
            close(&format!("{tag} local subset identity"), three, pair, 1e-9)?;
        }

        // atom sum and Möbius round trip
        let joint = d.mutual_information(x12, t).map_err(e)?;
        close(&format!("{tag} atom sum"), r.atom_sum(), joint, 1e-9)?;
        let rebuilt: Vec<f64> = (0..r.lattice.len())
            .map(|i| r.ipartial[i] + r.lattice.strictly_below(i).iter().map(|&j| r.ipartial[j]).sum::<f64>())
            .collect();
        for (a, b) in rebuilt.iter().zip(&r.icap) {
            close(&format!("{tag} mobius round trip"), *a, *b, 1e-12)?;
        }

        // co-information bounds
        let bounds = d.coinformation_bounds_check(x1, x2, t).map_err(e)?;
        if !bounds.holds(1e-9) {
            return Err(format!("{tag}: co-information bounds fail: {bounds:?}"));
        }

        // maxent: constraints met and entropy not below the reference
        let constraints = vec![x1.union(t), x2.union(t), x12];
        let (q, rep) = maxent_under_marginals(&ConstraintSet::new(d.clone(), constraints.clone()).map_err(e)?, &o)
            .map_err(e)?;
        if !rep.converged {
            return Err(format!("{tag}: maxent did not converge"));
        }
        for axes in constraints {
            let (mq, mp) = (q.marginal_table(axes).map_err(e)?, d.marginal_table(axes).map_err(e)?);
            let l1: f64 = mq.iter().zip(&mp).map(|(a, b)| (a - b).abs()).sum();
            close(&format!("{tag} maxent constraint"), l1, 0.0, 1e-9)?;
        }
        if q.entropy() < d.entropy() - 1e-9 {
            return Err(format!("{tag}: maxent entropy {} below reference {}", q.entropy(), d.entropy()));
        }
    }

    // independent identity: independent sources copied into the target
    for case in 0..100 {
        let (c1, c2) = (rng.random_range(2..=3usize), rng.random_range(2..=3usize));
        let p1: Vec<f64> = (0..c1).map(|_| rng.random::<f64>() + 0.05).collect();
        let p2: Vec<f64> = (0..c2).map(|_| rng.random::<f64>() + 0.05).collect();
        let (z1, z2): (f64, f64) = (p1.iter().sum(), p2.iter().sum());
        let rows: Vec<(Vec<usize>, f64)> = (0..c1)
            .flat_map(|i| (0..c2).map(move |j| (i, j)))
            .map(|(i, j)| (vec![i, j, i * c2 + j], p1[i] / z1 * p2[j] / z2))
            .collect();
        let d = JointDistribution::from_outcomes(vec![c1, c2, c1 * c2], Some(2), rows.iter().map(|(o, p)| (o.as_slice(), *p)))
            .map_err(e)?;
        let red = iccs(&d, &Antichain::parse("{1}{2}").unwrap(), IccsVariant::Game, &o).map_err(e)?.value;
        close(&format!("independent copy {case}"), red, 0.0, 1e-9)?;
    }

    // Möbius round trip on random redundancy values for larger lattices
    for n in 2..=4 {
        let lat = RedundancyLattice::build(n).map_err(e)?;
        for _ in 0..100 {
            let icap: Vec<f64> = (0..lat.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let at = moebius_inversion(&lat, &icap).map_err(e)?;
            for i in 0..lat.len() {
                let back = at[i] + lat.strictly_below(i).iter().map(|&j| at[j]).sum::<f64>();
                close(&format!("mobius n={n}"), back, icap[i], 1e-9)?;
            }
        }
    }

    // atom sum with three predictors
    for case in 0..100 {
        let d = random_system(&mut rng, 3);
        let r = pid(&d, ICCS, &o).map_err(e)?;
        let joint = d.mutual_information(AxisSet::from_axes([0, 1, 2]), AxisSet::single(3)).map_err(e)?;
        close(&format!("three-predictor system {case} atom sum"), r.atom_sum(), joint, 1e-9)?;
    }
    Ok(())
}

fn continuity_scan() -> Check {
    let mut names: Vec<String> = registry::NAMES.iter().map(|s| s.to_string()).collect();
    names.extend(step_grid(-0.8, 0.1, 0.1).unwrap().iter().map(|c| format!("predpred({c})")));
    let mut found = Vec::new();
    for name in &names {
        for variant in [IccsVariant::Game, IccsVariant::Decision] {
            let r = decompose(name, MeasureChoice::Iccs(variant))?;
            found.extend(r.warnings.iter().map(|w| format!("{name}: {w}")));
        }
    }
    if found.is_empty() {
        Ok(())
    } else {
        Err(format!("{} violations, first: {}", found.len(), found[0]))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 15] = [
        ("and/or decompositions", and_or),
        ("sum decompositions and coupled optimum", sum),
        ("three-outcome ternary system", three_outcome_system),
        ("four- and six-outcome ternary systems", four_and_six_outcome_systems),
        ("reduced or", reduced_or),
        ("unique misinformation", unique_misinformation),
        ("pointwise tables for rdn, sum, and", pointwise_tables),
        ("rdnxor and rdnunqxor", rdn_xor_systems),
        ("three-predictor goldens", three_predictor_goldens),
        ("and-duplicate consistency", and_duplicate_consistency),
        ("predictor coupling sweep", predpred_sweep_trends),
        ("gaussian sweeps", gaussian),
        ("stake game", stake_game),
        ("property suites", property_suites),
        ("continuity scan", continuity_scan),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
