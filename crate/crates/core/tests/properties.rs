mod common;

use framekit::bound::Bound;
use framekit::classify::{classify_finite, ClassificationReport};
use framekit::duality::{
    canonical_dual, minimal_norm_coefficients, weak_representation_check, DualSystem,
};
use framekit::frameops::{assemble, OperatorBundle};
use framekit::numkernel::{self, CMatrix, Tolerance, C64};
use framekit::sequences::HVector;
use proptest::prelude::*;

use common::{frob, sequence_from};

fn entry() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| C64::new(re, im))
}

/// Products X (n x k) Y (k x m), so rank deficiency shows up regularly.
fn synthesis() -> impl Strategy<Value = CMatrix> {
    (1..=5usize, 1..=7usize, 1..=5usize).prop_flat_map(|(n, m, k)| {
        let k = k.min(n).min(m);
        (
            prop::collection::vec(entry(), n * k),
            prop::collection::vec(entry(), k * m),
        )
            .prop_map(move |(x, y)| {
                let x = CMatrix::from_fn(n, k, |r, c| x[r * k + c]);
                let y = CMatrix::from_fn(k, m, |r, c| y[r * m + c]);
                &x * &y
            })
    })
}

fn matrix() -> impl Strategy<Value = CMatrix> {
    (1..=6usize, 1..=6usize).prop_flat_map(|(r, c)| {
        prop::collection::vec(entry(), r * c)
            .prop_map(move |v| CMatrix::from_fn(r, c, |i, j| v[i * c + j]))
    })
}

fn scaled(m: &CMatrix, s: f64) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |r, c| m.get(r, c) * s)
}

/// Rejects the zero matrix and anything too ill-conditioned to say much
/// about at fixed tolerances.
fn usable(d: &CMatrix) -> Option<(OperatorBundle, DualSystem)> {
    let b = assemble(&sequence_from(d), &Tolerance::default()).ok()?;
    let dual = canonical_dual(&b).ok()?;
    (dual.condition < 1e6).then_some((b, dual))
}

fn finite(b: Bound) -> f64 {
    b.finite().expect("finite bound")
}

fn flags(r: &ClassificationReport) -> [bool; 9] {
    [
        r.is_bessel,
        r.is_frame,
        r.is_lower_frame,
        r.is_riesz_fischer,
        r.is_riesz_basis,
        r.is_complete,
        r.is_minimal,
        r.is_omega_independent,
        r.is_exact,
    ]
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn moore_penrose_identities(m in matrix()) {
        let p = numkernel::pinv(&m, &Tolerance::default()).unwrap();
        let scale = frob(&m).max(1.0) * frob(&p).max(1.0);
        let mp = &m * &p;
        let pm = &p * &m;
        prop_assert!((&mp * &m).max_abs_diff(&m) <= 1e-10 * scale);
        prop_assert!((&pm * &p).max_abs_diff(&p) <= 1e-10 * scale * frob(&p).max(1.0));
        prop_assert!(mp.max_abs_diff(&mp.adjoint()) <= 1e-10 * scale);
        prop_assert!(pm.max_abs_diff(&pm.adjoint()) <= 1e-10 * scale);
    }

    #[test]
    fn bounds_scale_quadratically(d in synthesis(), s in 0.1..10.0f64) {
        let t = Tolerance::default();
        let r1 = classify_finite(&assemble(&sequence_from(&d), &t).unwrap()).unwrap();
        let r2 = classify_finite(&assemble(&sequence_from(&scaled(&d, s)), &t).unwrap()).unwrap();
        let s2 = s * s;
        prop_assert!(close(finite(r2.bessel_bound), s2 * finite(r1.bessel_bound), 1e-9));
        match (r1.lower_frame_bound, r2.lower_frame_bound) {
            (Bound::Finite(a1), Bound::Finite(a2)) => prop_assert!(close(a2, s2 * a1, 1e-6)),
            (x, y) => prop_assert_eq!(x, y),
        }
        prop_assert!(close(r2.riesz_fischer_bound, s2 * r1.riesz_fischer_bound, 1e-6)
            || r1.riesz_fischer_bound < 1e-12);
        prop_assert_eq!(flags(&r1), flags(&r2));
    }

    #[test]
    fn minimal_iff_riesz_fischer(d in synthesis()) {
        let r = classify_finite(&assemble(&sequence_from(&d), &Tolerance::default()).unwrap()).unwrap();
        prop_assert_eq!(r.is_minimal, r.is_riesz_fischer);
        prop_assert_eq!(r.is_minimal, r.is_omega_independent);
        if r.is_complete && r.is_lower_frame && r.is_minimal {
            prop_assert!(r.is_riesz_basis);
        }
        r.check_consistency().unwrap();
    }

    #[test]
    fn gram_inverse_norm_is_reciprocal_riesz_bound(d in synthesis()) {
        let b = assemble(&sequence_from(&d), &Tolerance::default()).unwrap();
        let r = classify_finite(&b).unwrap();
        prop_assume!(r.is_riesz_fischer && r.riesz_fischer_bound > 1e-6 * finite(r.bessel_bound));
        let inv = numkernel::inverse_hpd(&b.gram).unwrap();
        let top = *numkernel::hermitian_eigenvalues(&inv).unwrap().last().unwrap();
        prop_assert!(close(top, 1.0 / r.riesz_fischer_bound, 1e-6), "{} vs {}", top, 1.0 / r.riesz_fischer_bound);
    }

    #[test]
    fn dual_of_dual_is_original(d in synthesis()) {
        let Some((_, dual)) = usable(&d) else { return Ok(()) };
        let back = assemble(&dual.duals, &Tolerance::default()).unwrap();
        let again = canonical_dual(&back).unwrap();
        let k = dual.condition;
        let limit = 1e-9 * k * k * frob(&d).max(1.0);
        prop_assert!(again.synthesis().max_abs_diff(&d) <= limit);
    }

    #[test]
    fn canonical_coefficients_have_least_norm(
        d in synthesis(),
        seed in any::<u64>(),
    ) {
        let Some((b, dual)) = usable(&d) else { return Ok(()) };
        let t = Tolerance::default();
        let mut rng = common::rng(seed, 0x5EED);
        let c0 = common::random_vector(&mut rng, b.len());
        let h = HVector::new(b.synthesis.mul_vec(&c0).unwrap()).unwrap();
        let canonical = minimal_norm_coefficients(&b, &dual, &h, None).unwrap();
        prop_assert!(canonical.representable);

        // alternatives: canonical coefficients plus kernel vectors of D
        let p = numkernel::pinv(&b.synthesis, &t).unwrap();
        let proj = &CMatrix::identity(b.len()) - &(&p * &b.synthesis);
        for _ in 0..100 {
            let z = proj.mul_vec(&common::random_vector(&mut rng, b.len())).unwrap();
            let alt: Vec<C64> = canonical.raw.iter().zip(&z).map(|(a, b)| a + b).collect();
            let rep = minimal_norm_coefficients(&b, &dual, &h, Some(&alt)).unwrap();
            let a = rep.alternative.unwrap();
            prop_assert!(rep.norm_sq <= a.norm_sq * (1.0 + 1e-10) + 1e-12);
            prop_assert!(a.pythagoras_defect <= 1e-8 * (1.0 + a.norm_sq));
        }
    }

    #[test]
    fn weak_representation_on_span(d in synthesis(), seed in any::<u64>()) {
        let Some((b, dual)) = usable(&d) else { return Ok(()) };
        let mut rng = common::rng(seed, 0x3EA);
        let h = HVector::new(common::random_vector(&mut rng, b.space_dim())).unwrap();
        let g = HVector::new(
            b.synthesis.mul_vec(&common::random_vector(&mut rng, b.len())).unwrap(),
        ).unwrap();
        let defect = weak_representation_check(&b, &dual, &h, &g).unwrap();
        prop_assert!(defect <= 1e-9 * dual.condition * (1.0 + h.norm() * g.norm()));
    }
}
