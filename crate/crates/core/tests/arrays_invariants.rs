//! Triangular-array invariants across the preset ladders: centering-
//! argument decay, the Im/Re ratio bound for h, the product/exponential
//! consistency, the f-transform ratio bound, and ψ-uniformity decay.

use nclt::arrays::{bnk_t, center_r, center_t, fnk_eval, hnk_eval, psi_uniformity_diag};
use nclt::convolve::complex_powu;
use nclt::experiments::presets::{build, PresetArray, PresetName, PresetParams};
use nclt::experiments::special::compare_exp_sums;
use nclt::transforms::psi_b_eval;
use nclt::Complex64;
use std::f64::consts::PI;

fn circle_preset(name: PresetName, ladder: &[u64]) -> nclt::arrays::CircleArray {
    match build(name, PresetParams::default(), Some(ladder)).unwrap() {
        PresetArray::Circle { array, .. } => array,
        _ => panic!("expected circle preset"),
    }
}

fn line_preset(name: PresetName, ladder: &[u64]) -> nclt::arrays::LineArray {
    match build(name, PresetParams::default(), Some(ladder)).unwrap() {
        PresetArray::Line { array, .. } => array,
        _ => panic!("expected line preset"),
    }
}

fn grid(radius: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64))
        .collect()
}

fn circle_ladders() -> Vec<(PresetName, Vec<u64>)> {
    vec![
        (PresetName::Cor37, vec![100, 1_000, 10_000]),
        (PresetName::Cor38, vec![100, 1_000, 10_000]),
        (PresetName::RemarkRho, vec![8, 16, 32]),
    ]
}

#[test]
fn centering_arguments_shrink_along_ladder() {
    for (name, ladder) in circle_ladders() {
        let array = circle_preset(name, &ladder);
        let args: Vec<f64> = array
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(mu, _)| bnk_t(mu, array.tau).arg().abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        for w in args.windows(2) {
            assert!(
                w[1] <= w[0] + 1e-15,
                "{}: |arg b| grew {} -> {}",
                name.as_str(),
                w[0],
                w[1]
            );
        }
    }
}

#[test]
fn h_ratio_bound_is_stable_across_ladder() {
    // Empirical version of the |Im h| ≤ M·Re h bound: the worst ratio over
    // the whole ladder must stay within 10× the worst ratio at the top.
    let pts = grid(0.25, 16);
    for (name, ladder) in circle_ladders() {
        let array = circle_preset(name, &ladder);
        let ratios: Vec<f64> = array
            .rows
            .iter()
            .map(|row| {
                let mut worst = 0.0f64;
                for (mu, _) in row {
                    let centered = center_t(mu, array.tau);
                    for &z in &pts {
                        let h = hnk_eval(&centered, z).unwrap();
                        worst = worst.max(h.im.abs() / h.re.max(1e-300));
                    }
                }
                worst
            })
            .collect();
        let overall = ratios.iter().fold(0.0f64, |m, &r| m.max(r));
        let last = *ratios.last().unwrap();
        assert!(
            overall < 10.0 * last.max(1e-300),
            "{}: ratios {ratios:?} unstable",
            name.as_str()
        );
    }
}

#[test]
fn product_exponential_consistency_improves() {
    // sup_z |λ_n·ΠB^count - exp(i·arg λ + iΣ count·arg b - Σ count·h)|
    // decreases along each preset ladder.
    let pts = grid(0.25, 16);
    for (name, ladder) in circle_ladders() {
        let array = circle_preset(name, &ladder);
        let sups: Vec<f64> = (0..array.ladder.len())
            .map(|i| {
                let row = &array.rows[i];
                let lam = array.lambdas[i];
                let mut sup = 0.0f64;
                for &z in &pts {
                    let mut prod = lam;
                    let mut expo = Complex64::new(0.0, lam.arg());
                    for (mu, count) in row {
                        prod *= complex_powu(psi_b_eval(mu, z).unwrap().1, *count);
                        let b = bnk_t(mu, array.tau);
                        let h = hnk_eval(&center_t(mu, array.tau), z).unwrap();
                        expo += *count as f64 * (Complex64::new(0.0, b.arg()) - h);
                    }
                    sup = sup.max((prod - expo.exp()).norm());
                }
                sup
            })
            .collect();
        for w in sups.windows(2) {
            assert!(
                w[1] < w[0] || w[1] <= 1e-13,
                "{}: consistency sups {sups:?} not decreasing",
                name.as_str()
            );
        }
    }
}

#[test]
fn exp_sum_comparison_gap_closes_for_normal_rows() {
    // z_nk = log(b̄_nk·B_{μ_nk}(z₀)) against w_nk = -h_nk(z₀): the two
    // exponential sums converge to each other along the ladder.
    let z0 = Complex64::new(0.1, 0.0);
    let array = circle_preset(PresetName::Cor37, &[100, 1_000, 10_000]);
    let mut r = Vec::new();
    let mut z_rows = Vec::new();
    let mut w_rows = Vec::new();
    let mut s_rows = Vec::new();
    for (i, row) in array.rows.iter().enumerate() {
        r.push(array.lambdas[i].arg());
        let mut zs = Vec::new();
        let mut ws = Vec::new();
        let mut ss = Vec::new();
        for (mu, count) in row {
            let b = bnk_t(mu, array.tau);
            let bv = psi_b_eval(mu, z0).unwrap().1;
            let z = (b.conj() * bv).ln();
            let w = -hnk_eval(&center_t(mu, array.tau), z0).unwrap();
            for _ in 0..*count {
                zs.push(z);
                ws.push(w);
                ss.push(w.im.abs());
            }
        }
        z_rows.push(zs);
        w_rows.push(ws);
        s_rows.push(ss);
    }
    let rep = compare_exp_sums(&r, &z_rows, &w_rows, &s_rows).unwrap();
    assert!(rep.gaps.windows(2).all(|w| w[1] < w[0]), "gaps {:?}", rep.gaps);
    assert!(*rep.gaps.last().unwrap() < 1e-3);
    assert!(rep.eps.windows(2).all(|w| w[1] < w[0]), "eps {:?}", rep.eps);
}

#[test]
fn f_transform_ratio_bound_on_line_presets() {
    for name in [PresetName::BernR, PresetName::PoissonR] {
        let array = line_preset(name, &[16, 100, 1_000]);
        for row in &array.rows {
            for (nu, _) in row {
                let centered = center_r(nu);
                for &y in &[1.0, 2.0, 5.0] {
                    let f = fnk_eval(&centered, Complex64::new(0.0, y)).unwrap();
                    assert!(
                        f.re.abs() <= (3.0 + 6.0 * y) * f.im.abs() + 1e-15,
                        "{}: y = {y}, f = {f}",
                        name.as_str()
                    );
                }
            }
        }
    }
}

#[test]
fn psi_uniformity_decays_monotonically() {
    let pts = grid(0.5, 16);
    for (name, ladder) in circle_ladders() {
        let array = circle_preset(name, &ladder);
        let diags: Vec<f64> = array
            .rows
            .iter()
            .map(|row| psi_uniformity_diag(row, &pts))
            .collect();
        for w in diags.windows(2) {
            assert!(w[1] < w[0], "{}: diag {diags:?}", name.as_str());
        }
    }
}
