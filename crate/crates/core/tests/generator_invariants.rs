use bathflow_core::lindblad::{
    generator_apply, occupation, propagate, propagate_samples, DensityMatrix, Generator,
    GeneratorSpec, Variant,
};
use bathflow_core::reservoirs::fermi_occupation;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_spec(rng: &mut ChaCha8Rng, variant: Variant) -> GeneratorSpec {
    let ge = 10f64.powf(rng.random_range(6.0..10.0));
    let gc = 10f64.powf(rng.random_range(6.0..10.0));
    let ne = fermi_occupation(rng.random_range(0.01..20.0));
    let nc = fermi_occupation(rng.random_range(0.01..20.0));
    GeneratorSpec::fermionic(variant, 1e12, ge, gc, ne, nc).unwrap()
}

// p|ψ⟩⟨ψ| + (1−p)·diag(q, 1−q) with a random pure state ψ
fn random_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let b = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / norm, b / norm);
    let p = rng.random_range(0.0..1.0);
    let q = rng.random_range(0.0..1.0);
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            a * a.conj() * p + (1.0 - p) * q,
            a * b.conj() * p,
            b * a.conj() * p,
            b * b.conj() * p + (1.0 - p) * (1.0 - q),
        ],
    );
    let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    DensityMatrix::new(h).unwrap()
}

#[test]
fn trace_and_hermiticity_preserved_for_1000_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..1000 {
        let variant = if i % 2 == 0 {
            Variant::ReferenceThermal
        } else {
            Variant::PaperLiteral
        };
        let spec = random_spec(&mut rng, variant);
        let rho = random_state(&mut rng);
        let d = generator_apply(&spec, &rho).unwrap();
        // relative to the rate scale: absolute 1e-12 s⁻¹ is below rounding at γ ~ 1e9
        let scale = spec.total_rate() + spec.omega;
        assert!(
            d.trace().norm() / scale <= 1e-12,
            "trace {} at {spec:?}",
            d.trace()
        );
        let herm = (&d - d.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(herm / scale <= 1e-12, "hermiticity defect {herm}");
    }
}

#[test]
fn diagonal_dynamics_ignore_coherences() {
    let spec =
        GeneratorSpec::fermionic(Variant::ReferenceThermal, 1e12, 2e9, 5e8, 0.7, 0.2).unwrap();
    let gen = Generator::new(spec).unwrap();
    let beta = spec.total_rate();
    let times: Vec<f64> = (0..=20).map(|k| k as f64 * 0.25 / beta).collect();
    let dt = 1e-3 / beta;
    let start = |c: f64| {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5, 0.0),
                Complex64::new(c, 0.0),
                Complex64::new(c, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        );
        DensityMatrix::new(m).unwrap()
    };
    let plain = propagate_samples(&gen, &start(0.0), &times, dt).unwrap();
    let coherent = propagate_samples(&gen, &start(0.4), &times, dt).unwrap();
    for (p, c) in plain.iter().zip(&coherent) {
        for k in 0..2 {
            assert!((p.matrix()[(k, k)] - c.matrix()[(k, k)]).norm() <= 1e-12);
        }
        assert!(c.matrix()[(0, 1)].norm() <= 0.4 + 1e-15);
    }
}

#[test]
fn variant_means_follow_their_own_laws() {
    let (ge, gc, ne, nc) = (3e9, 1e9, 0.8, 0.1);
    let alpha = ge * ne + gc * nc;
    let gamma = ge + gc;
    for (variant, rate, steady) in [
        (Variant::ReferenceThermal, gamma, alpha / gamma),
        (
            Variant::PaperLiteral,
            gamma + 2.0 * alpha,
            alpha / (gamma + 2.0 * alpha),
        ),
    ] {
        let gen = Generator::new(GeneratorSpec::fermionic(variant, 1e12, ge, gc, ne, nc).unwrap())
            .unwrap();
        let times: Vec<f64> = (0..50).map(|k| k as f64 * 0.1 / gamma).collect();
        let out = propagate_samples(
            &gen,
            &DensityMatrix::number_state(2, 1).unwrap(),
            &times,
            1e-3 / rate,
        )
        .unwrap();
        for (t, rho) in times.iter().zip(&out) {
            let exact = steady + (1.0 - steady) * (-rate * t).exp();
            assert!(
                (occupation(rho) - exact).abs() <= 1e-8 * exact,
                "{variant:?} t={t}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagation_keeps_states_positive(
        seed in any::<u64>(),
        span in 0.0f64..8.0,
        literal in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let variant = if literal { Variant::PaperLiteral } else { Variant::ReferenceThermal };
        let spec = random_spec(&mut rng, variant);
        let gen = Generator::new(spec).unwrap();
        let rate = spec.total_rate() + 2.0 * spec.weighted_occupation_rate();
        let rho = propagate(&gen, &random_state(&mut rng), span / spec.total_rate(), 1e-2 / rate).unwrap();
        prop_assert!(rho.min_eigenvalue() >= -1e-9);
        prop_assert!((rho.trace().re - 1.0).abs() <= 1e-10);
    }
}
