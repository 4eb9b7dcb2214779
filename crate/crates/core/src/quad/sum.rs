use num_complex::Complex64;

use crate::minkowski::SpinorMatrix;

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Values that can be summed component by component.
pub trait Components: Copy + Send + Sync {
    const LEN: usize;
    fn write(&self, out: &mut [f64]);
    fn read(c: &[f64]) -> Self;

    fn magnitude(&self) -> f64 {
        let mut buf = [0.0; 8];
        self.write(&mut buf[..Self::LEN]);
        buf[..Self::LEN].iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    fn zero() -> Self {
        Self::read(&[0.0; 8][..Self::LEN])
    }

    fn scaled(&self, s: f64) -> Self {
        let mut buf = [0.0; 8];
        self.write(&mut buf[..Self::LEN]);
        for b in &mut buf[..Self::LEN] {
            *b *= s;
        }
        Self::read(&buf[..Self::LEN])
    }

    fn plus(&self, other: &Self) -> Self {
        let (mut a, mut b) = ([0.0; 8], [0.0; 8]);
        self.write(&mut a[..Self::LEN]);
        other.write(&mut b[..Self::LEN]);
        for i in 0..Self::LEN {
            a[i] += b[i];
        }
        Self::read(&a[..Self::LEN])
    }

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(-1.0))
    }

    fn is_finite(&self) -> bool {
        let mut buf = [0.0; 8];
        self.write(&mut buf[..Self::LEN]);
        buf[..Self::LEN].iter().all(|c| f64::is_finite(*c))
    }
}

impl Components for f64 {
    const LEN: usize = 1;
    fn write(&self, out: &mut [f64]) {
        out[0] = *self;
    }
    fn read(c: &[f64]) -> Self {
        c[0]
    }
}

impl Components for Complex64 {
    const LEN: usize = 2;
    fn write(&self, out: &mut [f64]) {
        out[0] = self.re;
        out[1] = self.im;
    }
    fn read(c: &[f64]) -> Self {
        Complex64::new(c[0], c[1])
    }
}

impl Components for [Complex64; 4] {
    const LEN: usize = 8;
    fn write(&self, out: &mut [f64]) {
        for (i, z) in self.iter().enumerate() {
            out[2 * i] = z.re;
            out[2 * i + 1] = z.im;
        }
    }
    fn read(c: &[f64]) -> Self {
        std::array::from_fn(|i| Complex64::new(c[2 * i], c[2 * i + 1]))
    }
}

impl Components for SpinorMatrix {
    const LEN: usize = 8;
    fn write(&self, out: &mut [f64]) {
        for (i, z) in self.0.iter().flatten().enumerate() {
            out[2 * i] = z.re;
            out[2 * i + 1] = z.im;
        }
    }
    fn read(c: &[f64]) -> Self {
        let z = |k: usize| Complex64::new(c[2 * k], c[2 * k + 1]);
        SpinorMatrix([[z(0), z(1)], [z(2), z(3)]])
    }
}

/// Compensated accumulator for any [`Components`] value.
#[derive(Debug, Clone)]
pub struct CompensatedVec {
    parts: Vec<Compensated>,
}

impl CompensatedVec {
    pub fn new(len: usize) -> Self {
        CompensatedVec { parts: vec![Compensated::default(); len] }
    }

    pub fn add<T: Components>(&mut self, x: &T) {
        let mut buf = [0.0; 8];
        x.write(&mut buf[..T::LEN]);
        for (p, v) in self.parts.iter_mut().zip(&buf[..T::LEN]) {
            p.add(*v);
        }
    }

    pub fn add_scaled<T: Components>(&mut self, x: &T, w: f64) {
        let mut buf = [0.0; 8];
        x.write(&mut buf[..T::LEN]);
        for (p, v) in self.parts.iter_mut().zip(&buf[..T::LEN]) {
            p.add(*v * w);
        }
    }

    pub fn value<T: Components>(&self) -> T {
        let buf: Vec<f64> = self.parts.iter().map(|p| p.value()).collect();
        T::read(&buf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_lost_bits() {
        let mut c = Compensated::default();
        c.add(1.0);
        for _ in 0..10 {
            c.add(1e-16);
        }
        c.add(-1.0);
        assert!((c.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn round_trip_components() {
        let m = SpinorMatrix::new(
            Complex64::new(1.0, 2.0),
            Complex64::new(3.0, 4.0),
            Complex64::new(5.0, 6.0),
            Complex64::new(7.0, 8.0),
        );
        let mut buf = [0.0; 8];
        m.write(&mut buf);
        assert_eq!(SpinorMatrix::read(&buf), m);
        assert_eq!(Complex64::new(1.0, -1.0).scaled(2.0), Complex64::new(2.0, -2.0));
    }
}
