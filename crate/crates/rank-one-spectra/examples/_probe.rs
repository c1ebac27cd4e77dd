use num_complex::Complex64;
use rank_one_spectra::assignment::{design_phi_given_psi, BudgetMode, TargetSpectrum};
use rank_one_spectra::operator::{assemble_dense, BaseOperator, PerturbationPair};
use rank_one_spectra::oracle::dense_eigenvalues;
use std::time::Instant;

fn main() {
    let i = Complex64::new(0.0, 1.0);
    for m in 1..=4usize {
        let base = BaseOperator::new((0..=m).map(|k| k as f64).collect(), 0, Some(1.0)).unwrap();
        let target = TargetSpectrum::new(vec![i], vec![m + 1]).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); m + 1];
        let res = design_phi_given_psi(&base, &ones, &target, BudgetMode::Exact).unwrap();
        let b = assemble_dense(&base, &res.pair).unwrap();
        let rep = dense_eigenvalues(&b, 0.05).unwrap();
        let max_dev = rep.values.iter().map(|v| (v - i).norm()).fold(0.0, f64::max);
        assert_eq!(rep.clusters.len(), 1);
        let center_dev = (rep.clusters[0].center - i).norm();
        println!(
            "m={m}: cluster size {} radius {:.2e}, |center − i| = {:.2e}, max|μ−i| = {:.2e}, cond {:.1e}",
            rep.clusters[0].size, rep.clusters[0].radius, center_dev, max_dev, res.condition_estimate
        );
    }

    // window-200 scan: 401x401 dense eigensolve
    let t0 = Instant::now();
    let base = BaseOperator::integer_window(-200, 200);
    let n = base.len();
    let coeff: Vec<Complex64> = base
        .indices()
        .map(|k| Complex64::new(if k == 0 { 1.0 } else { 1.0 / k.abs() as f64 }, 0.0))
        .collect();
    let pair = PerturbationPair::new(coeff.clone(), coeff).unwrap();
    let scan = rank_one_spectra::localization::asymptotics_scan(&base, &pair).unwrap();
    println!(
        "window ±200 ({n} dims): {} matched, {} relocated, elapsed {:?}",
        scan.deviations.len(),
        scan.relocated.len(),
        t0.elapsed()
    );
    let med = |lo: i64, hi: i64| -> f64 {
        let mut v: Vec<f64> = scan
            .deviations
            .iter()
            .filter(|(k, _)| k.abs() >= lo && k.abs() < hi)
            .map(|(_, d)| *d)
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    };
    println!("median dev [50,100) = {:.3e}, [100,200) = {:.3e}", med(50, 100), med(100, 200));
}
