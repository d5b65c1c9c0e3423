//! The SFB family at fixed rho against a direct evaluation: A(rho) and B(rho)
//! integrated straight from the BPSK/AWGN densities, then the closed forms.

use mlbound::bounds::{ln_family_at, Family, Partition};
use mlbound::channel::ChannelParams;
use mlbound::spectrum::{enumerate_iowef, GeneratorMatrix, WeightProfile};

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Trapezoid rule over a wide uniform grid; exponentially accurate for
/// these smooth, fast-decaying integrands.
fn ab_direct(ch: &ChannelParams, rho: f64) -> (f64, f64) {
    let s = ch.sigma;
    let (lo, hi) = (-1.0 - 40.0 * s, 1.0 + 40.0 * s);
    let steps = 200_000;
    let h = (hi - lo) / steps as f64;
    let pdf = |y: f64, m: f64| (-(y - m) * (y - m) / (2.0 * s * s)).exp() / (2.0 * std::f64::consts::PI * s * s).sqrt();
    let e = 1.0 / (1.0 + rho);
    let (mut a, mut b) = (0.0, 0.0);
    for i in 0..=steps {
        let y = lo + i as f64 * h;
        let w = if i == 0 || i == steps { 0.5 * h } else { h };
        // transmitted symbol is +1; the competitor is -1
        let (p0, p1) = (pdf(y, 1.0), pdf(y, -1.0));
        if p0 == 0.0 && p1 == 0.0 {
            continue;
        }
        let (t0, t1) = (p0.powf(e), p1.powf(e));
        let mix = 0.5 * (t0 + t1);
        a += w * t0 * t1 * mix.powf(rho - 1.0);
        b += w * t0 * t0 * mix.powf(rho - 1.0);
    }
    (a, b)
}

#[test]
fn hamming_15_11_family_matches_direct_evaluation() {
    let spec = enumerate_iowef(&GeneratorMatrix::hamming(4).unwrap()).unwrap().marginal();
    let (n, rate) = (15usize, 11.0 / 15.0);
    let u = Partition::new(n, [3, 4]).unwrap();
    let ch = ChannelParams::from_ebno_db(3.0, rate).unwrap();
    for rho in [0.2, 0.5, 0.8, 1.0] {
        let (a, b) = ab_direct(&ch, rho);
        let p = a / (a + b);
        let pmf = |l: usize| binom(n, l) * p.powi(l as i32) * (1.0 - p).powi((n - l) as i32);
        let ratio = |l: usize| spec.coeffs()[l].to_f64() / (binom(n, l) * 2f64.powf(-(n as f64) * (1.0 - rate)));
        let alpha = ratio(3).max(ratio(4));
        let base = 2f64.powf(n as f64 * rho * rate) * ((a + b) / 2.0).powi(n as i32);

        let sfb = alpha.powf(rho) * base;
        let msfb = (alpha * (pmf(3) + pmf(4))).powf(rho) * base;
        let ds2 = (ratio(3) * pmf(3) + ratio(4) * pmf(4)).powf(rho) * base;

        for (fam, want) in [(Family::Sfb, sfb), (Family::Msfb, msfb), (Family::Ds2, ds2)] {
            let got = ln_family_at(fam, &spec, &ch, Some(&u), rho).unwrap();
            assert!(
                (got - want.ln()).abs() < 1e-9,
                "{fam:?} rho={rho}: {got} vs {}",
                want.ln()
            );
        }
        assert!(ds2 <= msfb && msfb <= sfb);
    }
}
