use super::sum::{Components, CompensatedVec};
use crate::Error;

/// Fornberg's weights for the `k`-th derivative at 0 on the given offsets.
pub fn fornberg_weights(k: usize, offsets: &[f64]) -> Vec<f64> {
    let n = offsets.len();
    let mut c = vec![vec![0.0; k + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = offsets[0];
    for i in 1..n {
        let mn = i.min(k);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = offsets[i];
        for j in 0..i {
            let c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if j == i - 1 {
                for m in (1..=mn).rev() {
                    c[i][m] = c1 * (m as f64 * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for m in (1..=mn).rev() {
                c[j][m] = (c4 * c[j][m] - m as f64 * c[j][m - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[k]).collect()
}

/// Central stencil (offsets in units of the step, weights) for the `k`-th
/// derivative at accuracy `order`.
fn central_stencil(k: usize, order: usize) -> (Vec<i32>, Vec<f64>) {
    let half = ((k + order - 1) / 2) as i32;
    let offsets: Vec<i32> = (-half..=half).collect();
    let w = fornberg_weights(k, &offsets.iter().map(|&o| o as f64).collect::<Vec<_>>());
    (offsets, w)
}

/// Mixed partial derivative `∂_{d1} ∂_{d2} … g(x)` by central differences.
///
/// `directions` lists axis indices with repetition (`[0, 0]` is the second
/// derivative along axis 0). Stencils are tensor products of one-dimensional
/// central stencils of accuracy `order` (2 or 4).
pub fn finite_difference<T, G>(g: G, x: &[f64], directions: &[usize], step: f64, order: usize) -> Result<T, Error>
where
    T: Components,
    G: Fn(&[f64]) -> T,
{
    if order != 2 && order != 4 {
        return Err(Error::Domain(format!("finite-difference order must be 2 or 4, got {order}")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    if let Some(&bad) = directions.iter().find(|&&d| d >= x.len()) {
        return Err(Error::Domain(format!("direction {bad} out of range for a {}-point", x.len())));
    }
    if directions.is_empty() {
        return Ok(g(x));
    }
    let mut counts = vec![0usize; x.len()];
    for &d in directions {
        counts[d] += 1;
    }
    let axes: Vec<(usize, Vec<i32>, Vec<f64>)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(axis, &k)| {
            let (o, w) = central_stencil(k, order);
            (axis, o, w)
        })
        .collect();
    let total_power: i32 = directions.len() as i32;
    let mut acc = CompensatedVec::new(T::LEN);
    let mut idx = vec![0usize; axes.len()];
    let mut point = x.to_vec();
    loop {
        let mut weight = 1.0;
        point.copy_from_slice(x);
        for (a, (axis, offs, ws)) in axes.iter().enumerate() {
            weight *= ws[idx[a]];
            point[*axis] = x[*axis] + offs[idx[a]] as f64 * step;
        }
        if weight != 0.0 {
            acc.add_scaled(&g(&point), weight);
        }
        let mut a = 0;
        loop {
            if a == axes.len() {
                let v: T = acc.value();
                return Ok(v.scaled(step.powi(-total_power)));
            }
            idx[a] += 1;
            if idx[a] < axes[a].1.len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_stencils() {
        let w = fornberg_weights(1, &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        let w = fornberg_weights(2, &[-1.0, 0.0, 1.0]);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] + 2.0).abs() < 1e-14);
    }

    #[test]
    fn second_derivative_of_square() {
        let d: f64 = finite_difference(|x| x[0] * x[0], &[0.7], &[0, 0], 1e-2, 4).unwrap();
        assert!((d - 2.0).abs() < 1e-8);
    }

    #[test]
    fn linear_slope_is_exact() {
        let d: f64 = finite_difference(|x| 3.0 * x[0] - 2.0 * x[1] + 1.0, &[0.3, -0.4], &[1], 0.1, 2).unwrap();
        assert!((d + 2.0).abs() < 1e-13);
    }

    #[test]
    fn wave_operator_on_inverse_square() {
        let g = |b: &[f64]| 1.0 / (b[0] * b[0] - b[1] * b[1] - b[2] * b[2] - b[3] * b[3]);
        let beta = [1.0, 0.0, 0.0, 0.0];
        let mut box_g = 0.0;
        for (mu, sign) in [(0, 1.0), (1, -1.0), (2, -1.0), (3, -1.0)] {
            let d: f64 = finite_difference(g, &beta, &[mu, mu], 1e-2, 4).unwrap();
            box_g += sign * d;
        }
        assert!(box_g.abs() < 1e-6, "{box_g}");
    }

    #[test]
    fn mixed_partials() {
        let d: f64 = finite_difference(|x| (x[0] * x[1]).sin(), &[0.3, 0.5], &[0, 1], 1e-2, 4).unwrap();
        let exact = (0.15f64).cos() - 0.15 * (0.15f64).sin();
        assert!((d - exact).abs() < 1e-9);
    }

    #[test]
    fn fourth_order_rate() {
        let g = |x: &[f64]| x[0].exp() * x[0].sin();
        let exact = 1f64.exp() * (1f64.sin() + 1f64.cos());
        let e1 = (finite_difference::<f64, _>(g, &[1.0], &[0], 0.1, 4).unwrap() - exact).abs();
        let e2 = (finite_difference::<f64, _>(g, &[1.0], &[0], 0.05, 4).unwrap() - exact).abs();
        assert!((e1 / e2).log2() >= 3.5, "rate {}", (e1 / e2).log2());
    }

    #[test]
    fn bad_order() {
        assert!(finite_difference::<f64, _>(|x| x[0], &[0.0], &[0], 0.1, 3).is_err());
    }
}
