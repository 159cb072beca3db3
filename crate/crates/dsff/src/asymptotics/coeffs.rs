//! Correction coefficients `E1, E2` (Bessel side) and `F1, F2` (Airy side).

use crate::specfun::{xi, zeta};

/// `E1`/`E2` switch to their small-argument series below this point.
pub const E_SERIES_MAX: f64 = 0.01;
/// `F1`/`F2` switch to their series in `u = x - 1` for `|u|` below this.
pub const F_SERIES_RADIUS: f64 = 0.05;

// Row k holds the coefficients of alpha^0..alpha^4 multiplying the k-th power of the
// series variable: s^{2k+1} for E1, s^{2k} for E2 (s = sqrt x), u^k for F1 and F2.
#[rustfmt::skip]
pub(crate) const F1_SERIES: [[f64; 5]; 13] = [
    [-0.19798759355490864, 0.0, 0.6299605249474366, 0.0, 0.0],
    [0.07279543843837046, 0.0, -0.25198420997897464, 0.0, 0.0],
    [-0.05103368520633754, 0.0, 0.18358849584182438, 0.0, 0.0],
    [0.0411457134051519, 0.0, -0.1513505159619746, 0.0, 0.0],
    [-0.03528605971908625, 0.0, 0.1316966825899596, 0.0, 0.0],
    [0.031327690725558494, 0.0, -0.11812615073888595, 0.0, 0.0],
    [-0.028434798651621056, 0.0, 0.10803610256051074, 0.0, 0.0],
    [0.026206430356967708, 0.0, -0.10015546968745043, 0.0, 0.0],
    [-0.0244241196728929, 0.0, 0.09378039479117402, 0.0, 0.0],
    [0.02295774100059015, 0.0, -0.08848553196583119, 0.0, 0.0],
    [-0.02172449334712927, 0.0, 0.08399672147878112, 0.0, 0.0],
    [0.02066892930463381, 0.0, -0.08012825699681346, 0.0, 0.0],
    [-0.01975237722581506, 0.0, 0.07674928552821923, 0.0, 0.0],
];
pub(crate) const F2_SERIES: [[f64; 5]; 13] = [
    [-0.057777777777777775, 0.3333333333333333, 0.2, -0.3333333333333333, 0.0],
    [0.07024675324675325, 0.0, -0.29, 0.0, 0.125],
    [-0.06952285492285493, 0.0, 0.29355555555555557, 0.0, -0.125],
    [0.06913118507594698, 0.0, -0.29583665223665223, 0.0, 0.125],
    [-0.0689092879980275, 0.0, 0.29745579753579754, 0.0, -0.125],
    [0.06878082529419229, 0.0, -0.29868063119948834, 0.0, 0.125],
    [-0.06870691126937421, 0.0, 0.2996486118569883, 0.0, -0.125],
    [0.06866631099240582, 0.0, -0.30043839961214225, 0.0, 0.125],
    [-0.06864675511112471, 0.0, 0.30109864110538676, 0.0, -0.125],
    [0.06864082416123628, 0.0, -0.30166123465671335, 0.0, 0.125],
    [-0.06864386262002245, 0.0, 0.30214807525584514, 0.0, -0.125],
    [0.06865285991919401, 0.0, -0.3025747540723233, 0.0, 0.125],
    [-0.06866582070758272, 0.0, 0.3029527135204307, 0.0, -0.125],
];
pub(crate) const E1_SERIES: [[f64; 5]; 8] = [
    [-0.3333333333333333, 0.0, 0.3333333333333333, 0.0, 0.0],
    [-0.35555555555555557, 0.0, 0.08888888888888889, 0.0, 0.0],
    [-0.4167989417989418, 0.0, 0.042195767195767196, 0.0, 0.0],
    [-0.47498236331569665, 0.0, 0.024929453262786595, 0.0, 0.0],
    [-0.5282598972529529, 0.0, 0.016685422345144568, 0.0, 0.0],
    [-0.5772435740087857, 0.0, 0.012099296035142596, 0.0, 0.0],
    [-0.6226786824444865, 0.0, 0.009269417277946269, 0.0, 0.0],
    [-0.6651770874682338, 0.0, 0.007388037372934936, 0.0, 0.0],
];
pub(crate) const E2_SERIES: [[f64; 5]; 8] = [
    [0.0, 0.6666666666666666, 0.0, -0.6666666666666666, 0.0],
    [-0.4666666666666667, 0.4111111111111111, 0.25555555555555554, -0.14444444444444443, -0.05555555555555555],
    [-1.2428571428571429, 0.4936507936507937, 0.3455026455026455, -0.0746031746031746, -0.02962962962962963],
    [-2.3524074074074073, 0.5705114638447972, 0.4047089947089947, -0.04395061728395062, -0.018015873015873016],
    [-3.7974979958313293, 0.6408038052482496, 0.4498920421142643, -0.028612046389824168, -0.012060552616108172],
    [-5.578478075716171, 0.7053275260894308, 0.4875235068674222, -0.020088363135982185, -0.0086680002341378],
    [-7.69524423176275, 0.7650375786601536, 0.5205049561451678, -0.014933894376575153, -0.006568164737476906],
    [-10.147600893458575, 0.8207479049817605, 0.5503126548201626, -0.011596837167179873, -0.005180091757046489],
];

fn alpha_poly(row: &[f64; 5], a: f64) -> f64 {
    row.iter().rev().fold(0.0, |acc, c| acc * a + c)
}

fn series(table: &[[f64; 5]], a: f64, var: f64) -> f64 {
    table.iter().rev().fold(0.0, |acc, row| acc * var + alpha_poly(row, a))
}

/// Coefficients for a fixed Laguerre superscript `alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionCoefficients {
    pub alpha: f64,
}

impl ExpansionCoefficients {
    pub fn new(alpha: i64) -> Self {
        Self { alpha: alpha as f64 }
    }

    fn p_minus(&self, r: f64) -> f64 {
        let a = self.alpha;
        (4.0 * a * a - 1.0) / 8.0 + r / 4.0 + 5.0 / 24.0 * r * r
    }

    fn p_plus(&self, r: f64) -> f64 {
        let a = self.alpha;
        (4.0 * a * a - 1.0) / 8.0 - r / 4.0 + 5.0 / 24.0 * r * r
    }

    /// `E1` on `(0, 1)`.
    pub fn e1(&self, x: f64) -> f64 {
        let a = self.alpha;
        if x < E_SERIES_MAX {
            let s = x.sqrt();
            return s * series(&E1_SERIES, a, x);
        }
        let r = x / (1.0 - x);
        (4.0 * a * a - 1.0) / (8.0 * xi(x)) - ((1.0 - x) / x).sqrt() * self.p_minus(r)
    }

    /// `E2` on `(0, 1)`.
    pub fn e2(&self, x: f64) -> f64 {
        let a = self.alpha;
        if x < E_SERIES_MAX {
            return series(&E2_SERIES, a, x);
        }
        let r = x / (1.0 - x);
        let z = xi(x);
        let w = ((1.0 - x) / x).sqrt();
        -(2.0 * a - 1.0) * (2.0 * a + 1.0) * (2.0 * a + 3.0) * (2.0 * a + 5.0) / (128.0 * z * z)
            - (2.0 * a - 3.0) * (2.0 * a - 1.0) * (2.0 * a + 1.0) * (2.0 * a + 3.0) / 128.0 * (1.0 - x) / x
            + (2.0 * a + 1.0) * (2.0 * a + 3.0) / (8.0 * z) * w * self.p_minus(r)
            - (2.0 * a - 3.0) * (2.0 * a - 1.0) * (8.0 * a + 7.0) / 96.0
            + (7.0 * a * a / 48.0 - 121.0 / 192.0) * r
            - 77.0 / 96.0 * r * r
            - 385.0 / 1152.0 * r * r * r
    }

    /// `F1` on `(0, inf)`.
    pub fn f1(&self, x: f64) -> f64 {
        let u = x - 1.0;
        if u.abs() < F_SERIES_RADIUS {
            return series(&F1_SERIES, self.alpha, u);
        }
        let z = zeta(x);
        let r = x / u;
        -5.0 / 48.0 / (z * z) + (u / (x * z)).sqrt() * self.p_plus(r)
    }

    /// `F2` on `(0, inf)`.
    pub fn f2(&self, x: f64) -> f64 {
        let a = self.alpha;
        let u = x - 1.0;
        if u.abs() < F_SERIES_RADIUS {
            return series(&F2_SERIES, a, u);
        }
        let z = zeta(x);
        let r = x / u;
        -455.0 / 4608.0 / (z * z * z)
            + 7.0 / (48.0 * z) * (u / (x * z)).sqrt() * self.p_plus(r)
            + (2.0 * a - 3.0) * (2.0 * a - 1.0) * (2.0 * a + 1.0) * (2.0 * a + 3.0) / 128.0 * u / x
            - (2.0 * a - 3.0) * (2.0 * a - 1.0) * (8.0 * a + 7.0) / 96.0
            + (121.0 / 192.0 - 7.0 * a * a / 48.0) * r
            - 77.0 / 96.0 * r * r
            + 385.0 / 1152.0 * r * r * r
    }
}
