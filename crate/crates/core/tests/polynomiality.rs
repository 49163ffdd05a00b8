use grsn::counting::Counter;
use grsn::error::Error;
use grsn::poly::SymmetricLaurentPoly;
use grsn::polynomiality::{
    cycle_types, expected_from_sn, fit_grsn_polynomial, fit_sn_polynomial, generate_samples, predict_connected_count,
    unstable_convention, FitReport, Genus, Normalization, SampleMethod,
};
use grsn::{CycleType, GroupParams};
use num_bigint::BigUint;

fn params(r: u32, s: u32, n: u32) -> GroupParams {
    GroupParams::new(r, s, n).unwrap()
}

fn sn_fit(counter: &Counter, g: u32, ell: usize, ns: &[u32]) -> FitReport {
    let data =
        generate_samples(counter, params(1, 1, 1), Genus::integer(g), ell, 1, ns, SampleMethod::Inversion).unwrap();
    let pairs: Vec<(CycleType, BigUint)> = data.into_iter().map(|s| (s.cycle_type, s.count)).collect();
    fit_sn_polynomial(g, ell, &pairs).unwrap()
}

/// S_n polynomials for ℓ = 1, 2 up to genus 1; half-integer genera vanish.
fn sn_lookup(counter: &Counter, ell: usize) -> impl Fn(Genus) -> grsn::Result<SymmetricLaurentPoly> + '_ {
    move |g: Genus| {
        if !g.is_integer() {
            return Ok(SymmetricLaurentPoly::zero(ell));
        }
        if g.twice() == 0 && ell <= 2 {
            return unstable_convention(ell);
        }
        let ns: Vec<u32> = (ell as u32..=ell as u32 + 3).collect();
        Ok(sn_fit(counter, g.twice() / 2, ell, &ns).polynomial)
    }
}

#[test]
fn fitted_grsn_polynomials_match_the_expansion() {
    let c = Counter::default();
    for (r, s) in [(2, 1), (2, 2), (3, 1), (4, 2)] {
        let p = params(r, s, 2);
        let deltas: Vec<u8> = if p.q() >= 2 { vec![0, 1] } else { vec![1] };
        for (twice_g, ell) in [(0u32, 1usize), (0, 2), (1, 1), (2, 1), (1, 2), (2, 2)] {
            let genus = Genus::from_twice(twice_g);
            for &delta in &deltas {
                let ns: Vec<u32> = (ell as u32..=ell as u32 + 3).collect();
                let data = generate_samples(&c, p, genus, ell, delta, &ns, SampleMethod::Inversion).unwrap();
                let report = fit_grsn_polynomial(genus, ell, delta, p, Normalization::Derived, &data).unwrap();
                let expected = expected_from_sn(p, delta, genus, ell, &sn_lookup(&c, ell)).unwrap();
                assert_eq!(report.polynomial, expected, "G({r},{s},n) g={genus} l={ell} delta={delta}");
                assert!(report.window_ok && report.n_independent);
            }
        }
    }
}

#[test]
fn known_low_genus_forms() {
    let c = Counter::default();
    // P^δ_{1,1} = δ(x−1)/24 + f_2^φ/(2r²)
    let p = params(3, 1, 2);
    let data = generate_samples(&c, p, Genus::integer(1), 1, 1, &[1, 2, 3, 4], SampleMethod::Inversion).unwrap();
    let r = fit_grsn_polynomial(Genus::integer(1), 1, 1, p, Normalization::Derived, &data).unwrap();
    // f_2^φ = 2 at q = 3, so the constant is −1/24 + 2/18
    let mut want = SymmetricLaurentPoly::zero(1);
    want.add_term(vec![1], "1/24".parse().unwrap());
    want.add_term(vec![0], "5/72".parse().unwrap());
    assert_eq!(r.polynomial, want);

    // P_{0,2} for S_n is the 1/(x₁+x₂) convention, checked on all cycle types of length 2
    let r = sn_fit(&c, 0, 2, &[2, 3, 4, 5]);
    assert_eq!(r.polynomial, unstable_convention(2).unwrap());
    assert_eq!(r.held_out.len(), cycle_types(2, 2).len() + cycle_types(3, 2).len() + 2 + 2);
}

#[test]
fn half_integer_genus() {
    let c = Counter::default();
    let p = params(2, 1, 2);
    let genus: Genus = "1/2".parse().unwrap();
    // δ = 1: P = f_1^φ/r · p_1 · P_{0,1} = 0 since f_1 = 0 at t = 0; δ = 0: (1/2)·x/x² = 1/(2x)
    for (delta, coeff) in [(1u8, "0"), (0, "1/2")] {
        let data = generate_samples(&c, p, genus, 1, delta, &[1, 2, 3, 4], SampleMethod::Inversion).unwrap();
        let r = fit_grsn_polynomial(genus, 1, delta, p, Normalization::Derived, &data).unwrap();
        assert_eq!(r.polynomial.coeff(&[-1]), coeff.parse().unwrap(), "delta={delta}");
        assert_eq!(r.window, (-1, -1));
        assert!(r.window_ok);
    }
    assert!(fit_sn_polynomial(0, 1, &[]).is_err());
}

#[test]
fn reports_reproduce_training_points_and_round_trip() {
    let c = Counter::default();
    let p = params(2, 2, 2);
    let data = generate_samples(&c, p, Genus::integer(1), 2, 1, &[2, 3, 4, 5], SampleMethod::Inversion).unwrap();
    let r = fit_grsn_polynomial(Genus::integer(1), 2, 1, p, Normalization::Derived, &data).unwrap();
    for s in &data {
        let n = s.cycle_type.n();
        let m = Genus::integer(1).length(n, 2).unwrap();
        assert_eq!(predict_connected_count(&r, &s.cycle_type, params(2, 2, n), 1, m).unwrap(), s.count);
    }
    let js = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<FitReport>(&js).unwrap(), r);
    let bad = predict_connected_count(&r, &s_type(&[3, 2]), params(2, 2, 5), 1, 4).unwrap_err();
    assert!(matches!(bad, Error::InvalidRequest(_)));
}

fn s_type(parts: &[u32]) -> CycleType {
    CycleType::new(parts.to_vec()).unwrap()
}

#[test]
fn printed_normalization_exposes_n_dependence() {
    let c = Counter::default();
    let p = params(2, 1, 2);
    let data = generate_samples(&c, p, Genus::integer(0), 1, 1, &[2, 3, 4], SampleMethod::Enumeration).unwrap();
    let err = fit_grsn_polynomial(Genus::integer(0), 1, 1, p, Normalization::Printed, &data).unwrap_err();
    assert!(matches!(err, Error::NInconsistent(_)), "{err}");
}
