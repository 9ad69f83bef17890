use super::ComplexValue;

/// Compensated (Kahan–Babuška/Neumaier) summation of complex terms, applied
/// componentwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    re: f64,
    im: f64,
    c_re: f64,
    c_im: f64,
}

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: ComplexValue) {
        neumaier(&mut self.re, &mut self.c_re, z.re);
        neumaier(&mut self.im, &mut self.c_im, z.im);
    }

    pub fn value(&self) -> ComplexValue {
        ComplexValue::new(self.re + self.c_re, self.im + self.c_im)
    }
}

impl FromIterator<ComplexValue> for KahanSum {
    fn from_iter<I: IntoIterator<Item = ComplexValue>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_bits() {
        let terms = [1e16, 1.0, -1e16, 1.0];
        let s: KahanSum = terms.iter().map(|&x| ComplexValue::new(x, -x)).collect();
        assert_eq!(s.value(), ComplexValue::new(2.0, -2.0));
    }
}
