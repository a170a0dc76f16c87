use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavestab::grid::norm;
use wavestab::linalg::{dot, DenseMatrix};
use wavestab::operators::{build_h, build_hill_l};
use wavestab::profiles::make_profile;
use wavestab::spectral::{
    analyze, check_assumption_a, eigendecompose, eigendecompose_matrix, kernel_pseudo_solve, project_p0, project_p1,
    reduced_index,
};
use wavestab::{inner_product, make_grid, Grid, Model, OperatorH, SolverOpts, Tolerances};

fn operator(model: Model, c: f64, p: f64, n: usize) -> OperatorH {
    let g = make_grid(model.default_half_length(c), n).unwrap();
    build_h(&make_profile(model, c, p, &g, &SolverOpts::default()).unwrap()).unwrap()
}

fn cosine(g: &Grid, a: &[f64], b: &[f64]) -> f64 {
    inner_product(g, a, b).unwrap() / (norm(g, a) * norm(g, b))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[test]
fn small_matrices() {
    let s = eigendecompose_matrix(&DenseMatrix::identity(2), 1.0).unwrap();
    assert_eq!(s.eigenvalues, vec![1.0, 1.0]);
    let s = eigendecompose_matrix(&DenseMatrix::diagonal(&[9.0, 0.0, -4.0]), 1.0).unwrap();
    assert!(s.eigenvalues.iter().zip([-4.0, 0.0, 9.0]).all(|(a, b)| (a - b).abs() < 1e-14));
    let s = eigendecompose_matrix(&DenseMatrix::diagonal(&[-1.0, -2.0, 0.0, 3.0]), 1.0).unwrap();
    let rep = check_assumption_a(&s, &Tolerances::default(), None);
    assert!(!rep.assumption_a);
    assert_eq!(rep.n_negative, 2);
    let s = eigendecompose_matrix(&DenseMatrix::diagonal(&[-1.0, 0.0, 3.0, 5.0]), 1.0).unwrap();
    let rep = check_assumption_a(&s, &Tolerances::default(), None);
    assert!(rep.assumption_a && (rep.delta_sq - 1.0).abs() < 1e-14 && (rep.sigma_sq - 3.0).abs() < 1e-14);
}

#[test]
fn hill_operator_structure() {
    let g = make_grid(30.0, 512).unwrap();
    let prof = make_profile(Model::Boussinesq, 0.0, 2.0, &g, &SolverOpts::default()).unwrap();
    let l = build_hill_l(&prof).unwrap();
    let spec = eigendecompose(&l).unwrap();
    let ev = &spec.eigenvalues;
    assert!(ev[0] < 0.0 && ev[1].abs() < 1e-8 && ev[2] > 1e-3);
    // The ground state of the Hill operator is known: −5/4 for p = 2, c = 0.
    assert!((ev[0] + 1.25).abs() < 1e-9, "{}", ev[0]);
}

#[test]
fn spectrum_invariants() {
    let op = operator(Model::Boussinesq, 0.3, 3.0, 256);
    let spec = eigendecompose(&op).unwrap();
    let g = &op.grid;
    let scale = op.effective().row_sum_norm();
    for j in [0, 1, 2, 100, 255] {
        let v = spec.vector(j);
        let mut r = op.apply(&v);
        r.iter_mut().zip(&v).for_each(|(a, b)| *a -= spec.eigenvalues[j] * b);
        assert!(max_abs(&r) <= 1e-8 * scale);
        assert!((norm(g, &v) - 1.0).abs() <= 1e-10);
        let w = spec.vector(j + 1 - (j == 255) as usize * 2);
        assert!(inner_product(g, &v, &w).unwrap().abs() <= 1e-10);
    }
    let c = spec.coefficients(&spec.vector(3));
    assert!((c[3] - 1.0).abs() < 1e-12);
    let back = spec.synthesize(&c);
    assert!(max_abs(&back.iter().zip(spec.vector(3)).map(|(a, b)| a - b).collect::<Vec<_>>()) < 1e-12);
}

#[test]
fn boussinesq_assumptions_and_kernel() {
    let op = operator(Model::Boussinesq, 0.3, 3.0, 512);
    let (_, rep) = analyze(&op, &Tolerances::default()).unwrap();
    assert!(rep.assumption_a && rep.assumption_b);
    assert_eq!((rep.n_negative, rep.kernel_dim), (1, 1));
    assert!(rep.b_pairing > 0.01);
    let g = &op.grid;
    assert!((norm(g, &rep.phi) - 1.0).abs() < 1e-12 && (norm(g, &rep.psi0) - 1.0).abs() < 1e-12);
    let phi = op.reference_kernel().unwrap();
    // Box kernel is the profile minus its mean; the lifted kernel is the profile itself.
    let mean = phi.iter().sum::<f64>() / phi.len() as f64;
    let centered: Vec<f64> = phi.iter().map(|v| v - mean).collect();
    assert!(cosine(g, &rep.psi0, &centered) >= 1.0 - 1e-8);
    let red = reduced_index(&op, &Tolerances::default()).unwrap().unwrap();
    assert!(cosine(g, &red.psi0_line, phi) >= 1.0 - 1e-8);
}

#[test]
fn kgz_assumptions_and_kernel() {
    let op = operator(Model::Kgz, 0.5, 3.0, 512);
    let (_, rep) = analyze(&op, &Tolerances::default()).unwrap();
    assert!(rep.assumption_a && rep.assumption_b);
    assert!(rep.b_pairing > 1e-3);
    let g = &op.grid;
    let n = g.n_points();
    let reference = op.reference_kernel().unwrap();
    let red = reduced_index(&op, &Tolerances::default()).unwrap().unwrap();
    assert!(cosine(g, &red.psi0_line, reference) >= 1.0 - 1e-8);
    let mean = reference[n..].iter().sum::<f64>() / n as f64;
    let mut centered = reference.to_vec();
    centered[n..].iter_mut().for_each(|v| *v -= mean);
    assert!(cosine(g, &rep.psi0, &centered) >= 1.0 - 1e-8);

    // g′ = −φ f / μ² for the kernel vector (f, g).
    let mu2 = 1.0 - 0.25;
    let phi = &reference[..n];
    let phi_vals: Vec<f64> = {
        let gr = make_grid(Model::Kgz.default_half_length(0.5), 512).unwrap();
        make_profile(Model::Kgz, 0.5, 3.0, &gr, &SolverOpts::default()).unwrap().values
    };
    assert!(phi.iter().zip(wavestab::diff_matrix(g, 1).unwrap().matvec(&phi_vals)).all(|(a, b)| (a - b).abs() < 1e-12));
    let dpsi = op.derivative(&rep.psi0);
    for j in 0..n {
        let want = -phi_vals[j] * rep.psi0[j] / mu2;
        assert!((dpsi[n + j] - want).abs() <= 1e-8, "j={j}");
    }
}

#[test]
fn beam_pairing_is_nonzero() {
    let op = operator(Model::Beam, 1.0, 3.0, 512);
    let (_, rep) = analyze(&op, &Tolerances::default()).unwrap();
    assert!(rep.assumption_a && rep.assumption_b);
    assert!(rep.b_pairing > 1e-3);
    assert!(dot(&rep.psi0, op.reference_kernel().unwrap()) > 0.0);
}

#[test]
fn refinement_stability() {
    for (model, c) in [(Model::Boussinesq, 0.3), (Model::Beam, 0.5)] {
        let l = model.default_half_length(c);
        let rep = |n: usize| {
            let g = make_grid(l, n).unwrap();
            let op = build_h(&make_profile(model, c, if model == Model::Beam { 3.0 } else { 2.0 }, &g, &SolverOpts::default()).unwrap())
                .unwrap();
            analyze(&op, &Tolerances::default()).unwrap().1
        };
        let (a, b) = (rep(256), rep(512));
        assert!((a.delta_sq - b.delta_sq).abs() <= 1e-6 * b.delta_sq, "{model}");
        assert!((a.sigma_sq - b.sigma_sq).abs() <= 1e-6 * b.sigma_sq, "{model}");
    }
}

#[test]
fn pseudo_solve() {
    let op = operator(Model::Boussinesq, 0.3, 2.0, 256);
    let (spec, rep) = analyze(&op, &Tolerances::default()).unwrap();
    let third = spec.vector(2);
    let rhs: Vec<f64> = third.iter().map(|v| spec.eigenvalues[2] * v).collect();
    let x = kernel_pseudo_solve(&spec, &rep, &rhs).unwrap();
    assert!(max_abs(&x.iter().zip(&third).map(|(a, b)| a - b).collect::<Vec<_>>()) < 1e-8);

    let dpsi = op.derivative(&rep.psi0);
    let x = kernel_pseudo_solve(&spec, &rep, &dpsi).unwrap();
    assert!(inner_product(&op.grid, &x, &dpsi).unwrap() < 0.0);
    assert!(kernel_pseudo_solve(&spec, &rep, &rep.psi0).is_err());

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let v: Vec<f64> = (0..256).map(|_| rng.random_range(-1.0..1.0)).collect();
        let along = inner_product(&op.grid, &v, &rep.psi0).unwrap();
        let v: Vec<f64> = v.iter().zip(&rep.psi0).map(|(a, b)| a - along * b).collect();
        let back = op.apply(&kernel_pseudo_solve(&spec, &rep, &v).unwrap());
        let err = max_abs(&back.iter().zip(&v).map(|(a, b)| a - b).collect::<Vec<_>>());
        assert!(err <= 1e-8 * max_abs(&v), "{err:e}");
    }
}

#[test]
fn projections() {
    let op = operator(Model::Boussinesq, 0.3, 2.0, 256);
    let (_, rep) = analyze(&op, &Tolerances::default()).unwrap();
    let g = &op.grid;
    assert!(max_abs(&project_p0(&rep, &rep.phi)) < 1e-12);
    assert!(max_abs(&project_p1(&rep, &rep.psi0)) < 1e-12);
    let v = g.sample(|x| (-(x - 1.0).powi(2)).exp());
    let p0 = project_p0(&rep, &v);
    let p00 = project_p0(&rep, &p0);
    assert!(max_abs(&p0.iter().zip(&p00).map(|(a, b)| a - b).collect::<Vec<_>>()) < 1e-12);
    let p1 = project_p1(&rep, &v);
    let p10 = project_p1(&rep, &p0);
    assert!(max_abs(&p1.iter().zip(&p10).map(|(a, b)| a - b).collect::<Vec<_>>()) < 1e-12);
}
