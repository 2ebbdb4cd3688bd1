//! Sparse multivariate Laurent polynomials with exact coefficients, the
//! three parametric families and the substitution that links `Q_{λ+4}(X-1,Y)`
//! to its genus-reducing model.

use std::collections::BTreeMap;
use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Ring operations required from polynomial coefficients.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + ToPrimitive
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
}

impl<C> Coefficient for C where
    C: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + ToPrimitive
        + Neg<Output = C>
        + Add<Output = C>
        + Sub<Output = C>
        + Mul<Output = C>
        + Send
        + Sync
{
}

/// Exponent vector of a monomial.
pub type Exponents = Vec<i32>;

/// A Laurent polynomial in `nvars` variables.
///
/// Terms are kept in lexicographic order of their exponent vectors and no
/// stored coefficient is zero.
#[derive(Clone, PartialEq)]
pub struct LaurentPolynomial<C> {
    nvars: usize,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Coefficient> LaurentPolynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1, "a polynomial needs at least one variable");
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: C) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    /// The variable with index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, C::one())
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, C)>,
    {
        if nvars == 0 {
            return Err(Error::InvalidParameter("nvars must be positive".into()));
        }
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::InvalidParameter(format!(
                    "exponent vector {e:?} has length {} but nvars = {nvars}",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[i32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    /// Smallest and largest exponent of variable `var`, `None` for the zero
    /// polynomial.
    pub fn degree_range(&self, var: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e[var]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentPolynomial<D> {
        let mut p = LaurentPolynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c));
        }
        p
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|a| a.clone() * c.clone())
    }

    /// Multiplies by the monomial with exponent vector `shift`.
    pub fn shift_monomial(&self, shift: &[i32]) -> Self {
        assert_eq!(shift.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        Self {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluates at a complex point. Terms are summed in lexicographic order,
    /// so the result is reproducible bit for bit.
    pub fn evaluate<T: Real>(&self, point: &[Complex<T>]) -> Result<Complex<T>> {
        if point.len() != self.nvars {
            return Err(Error::InvalidParameter(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        if point.iter().any(|z| z.re.is_zero() && z.im.is_zero()) {
            return Err(Error::ZeroCoordinate);
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (e, c) in &self.terms {
            let mut m = Complex::new(coeff_to_real::<T, C>(c), T::zero());
            for (z, &k) in point.iter().zip(e) {
                if k != 0 {
                    m = m * z.powi(k);
                }
            }
            acc = acc + m;
        }
        Ok(acc)
    }

    /// Splits off the variable `var`: `self = var^shift · Σ_j coeffs[j] var^j`.
    pub fn as_poly_in(&self, var: usize) -> Result<UnivariateView<C>> {
        if self.nvars < 2 {
            return Err(Error::InvalidParameter(
                "as_poly_in needs at least two variables".into(),
            ));
        }
        if var >= self.nvars {
            return Err(Error::InvalidParameter(format!(
                "no variable with index {var}"
            )));
        }
        let Some((lo, hi)) = self.degree_range(var) else {
            return Ok(UnivariateView {
                var,
                shift: 0,
                coeffs: vec![],
                nvars: self.nvars,
            });
        };
        let mut coeffs = vec![Self::zero(self.nvars); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            let j = (e[var] - lo) as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            coeffs[j].add_term(e2, c.clone());
        }
        Ok(UnivariateView {
            var,
            shift: lo,
            coeffs,
            nvars: self.nvars,
        })
    }

    /// Converts a polynomial that depends on variable `var` only into a dense
    /// numeric Laurent polynomial.
    pub fn to_dense<T: Real>(&self, var: usize) -> Result<DenseLaurent<T>> {
        for e in self.terms.keys() {
            if e.iter().enumerate().any(|(i, &k)| i != var && k != 0) {
                return Err(Error::InvalidParameter(format!(
                    "polynomial depends on variables other than {var}"
                )));
            }
        }
        let Some((lo, hi)) = self.degree_range(var) else {
            return Ok(DenseLaurent {
                min_exp: 0,
                coeffs: vec![],
            });
        };
        let mut coeffs = vec![T::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            coeffs[(e[var] - lo) as usize] = coeff_to_real::<T, C>(c);
        }
        Ok(DenseLaurent {
            min_exp: lo,
            coeffs,
        })
    }

    /// Substitutes `images[i]` for variable `i`. Variables appearing with a
    /// negative exponent must map to monomials.
    pub fn substitute(&self, images: &[LaurentPolynomial<C>]) -> Result<LaurentPolynomial<C>>
    where
        C: Div<Output = C>,
    {
        if images.len() != self.nvars {
            return Err(Error::InvalidParameter(
                "one image per variable required".into(),
            ));
        }
        let target = images.first().map(|p| p.nvars).unwrap_or(1);
        if images.iter().any(|p| p.nvars != target) {
            return Err(Error::InvalidParameter("images must share nvars".into()));
        }
        let mut cache: Vec<BTreeMap<i32, LaurentPolynomial<C>>> = vec![BTreeMap::new(); self.nvars];
        let mut out = LaurentPolynomial::zero(target);
        for (e, c) in &self.terms {
            let mut m = LaurentPolynomial::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !cache[i].contains_key(&k) {
                    let pw = if k > 0 {
                        images[i].pow(k as u32)
                    } else {
                        images[i].invert_monomial()?.pow((-k) as u32)
                    };
                    cache[i].insert(k, pw);
                }
                m = &m * &cache[i][&k];
            }
            out = &out + &m;
        }
        Ok(out)
    }

    fn invert_monomial(&self) -> Result<Self>
    where
        C: Div<Output = C>,
    {
        if self.terms.len() != 1 {
            return Err(Error::InvalidParameter(
                "negative powers need a monomial image".into(),
            ));
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let e: Exponents = e.iter().map(|k| -k).collect();
        Ok(Self::monomial(self.nvars, e, C::one() / c.clone()))
    }
}

fn coeff_to_real<T: Real, C: ToPrimitive>(c: &C) -> T {
    T::from_f64(c.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(T::nan)
}

impl<C: Coefficient> Add for &LaurentPolynomial<C> {
    type Output = LaurentPolynomial<C>;
    fn add(self, rhs: Self) -> LaurentPolynomial<C> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &LaurentPolynomial<C> {
    type Output = LaurentPolynomial<C>;
    fn sub(self, rhs: Self) -> LaurentPolynomial<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Neg for &LaurentPolynomial<C> {
    type Output = LaurentPolynomial<C>;
    fn neg(self) -> LaurentPolynomial<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<C: Coefficient> Mul for &LaurentPolynomial<C> {
    type Output = LaurentPolynomial<C>;
    fn mul(self, rhs: Self) -> LaurentPolynomial<C> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coefficient> $tr for LaurentPolynomial<C> {
            type Output = LaurentPolynomial<C>;
            fn $m(self, rhs: Self) -> LaurentPolynomial<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coefficient + fmt::Display> fmt::Display for LaurentPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{v}")?,
                    _ => write!(f, "*x{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

impl<C: Debug> Debug for LaurentPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaurentPolynomial")
            .field("nvars", &self.nvars)
            .field("terms", &self.terms)
            .finish()
    }
}

/// A polynomial viewed as a polynomial in one distinguished variable.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariateView<C> {
    pub var: usize,
    /// Power of `var` factored out so that `coeffs` starts at degree 0.
    pub shift: i32,
    /// `coeffs[j]` multiplies `var^(j + shift)`; none of them involve `var`.
    pub coeffs: Vec<LaurentPolynomial<C>>,
    nvars: usize,
}

impl<C: Coefficient> UnivariateView<C> {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn reassemble(&self) -> LaurentPolynomial<C> {
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (j, c) in self.coeffs.iter().enumerate() {
            let mut s = vec![0; self.nvars];
            s[self.var] = j as i32 + self.shift;
            out = &out + &c.shift_monomial(&s);
        }
        out
    }
}

/// Dense univariate Laurent polynomial `Σ_j coeffs[j] x^(min_exp + j)` with
/// real coefficients, used in inner loops.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseLaurent<T> {
    pub min_exp: i32,
    pub coeffs: Vec<T>,
}

impl<T: Real> DenseLaurent<T> {
    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + Complex::new(c, T::zero());
        }
        if self.min_exp != 0 {
            acc = acc * x.powi(self.min_exp);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(j, c)| c.is_zero() || self.min_exp + j as i32 == 0)
    }
}

/// Writes the sparse text form: one `coeff:e1,e2,...` line per term.
pub fn to_text<C: Coefficient + fmt::Display>(p: &LaurentPolynomial<C>) -> String {
    let mut s = String::new();
    for (e, c) in p.terms() {
        let exps: Vec<String> = e.iter().map(|k| k.to_string()).collect();
        s.push_str(&format!("{c}:{}\n", exps.join(",")));
    }
    s
}

/// Parses the sparse text form. Coefficients are integers, fractions `a/b`
/// or decimals, all read exactly. Blank lines and `#` comments are ignored.
pub fn parse_text(src: &str) -> Result<LaurentPolynomial<BigRational>> {
    let mut terms = Vec::new();
    let mut nvars = None;
    for (i, raw) in src.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            line: line_no,
            msg: msg.to_string(),
        };
        let (c, e) = line
            .split_once(':')
            .ok_or_else(|| err("expected `coeff:e1,e2`"))?;
        let coeff = parse_rational(c.trim()).ok_or_else(|| err("bad coefficient"))?;
        let exps: Exponents = e
            .split(',')
            .map(|t| t.trim().parse::<i32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err("bad exponent"))?;
        match nvars {
            None => nvars = Some(exps.len()),
            Some(n) if n != exps.len() => return Err(err("inconsistent number of exponents")),
            _ => {}
        }
        terms.push((exps, coeff));
    }
    let nvars = nvars.ok_or(Error::Parse {
        line: 0,
        msg: "no terms".into(),
    })?;
    LaurentPolynomial::from_terms(nvars, terms)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let digits = fp.len() as u32;
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let ip = if ip.is_empty() || ip == "-" || ip == "+" {
            "0"
        } else {
            ip
        };
        let whole: BigInt = ip.parse().ok()?;
        let frac: BigInt = if fp.is_empty() {
            BigInt::zero()
        } else {
            fp.parse().ok()?
        };
        let den = BigInt::from(10u32).pow(digits);
        let frac = if neg { -frac } else { frac };
        return Some(BigRational::new(whole * &den + frac, den));
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// The polynomial families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `Q_k(X,Y) = Y² + (X⁴+kX³+2kX²+kX+1)Y + X⁴`, integer `k`.
    Q,
    /// `P_λ(x,y) = (x+1)y² + (x²-(λ+2)x+1)y + x(x+1)`.
    P,
    /// `R_λ(x,y) = x + 1/x + y + 1/y + λ`.
    R,
    /// `Q_{λ+4}(X-1, Y)`, expanded.
    QShifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub parameter: f64,
}

impl FamilySpec {
    pub fn new(family: Family, parameter: f64) -> Result<Self> {
        if !parameter.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "parameter {parameter} is not finite"
            )));
        }
        if family == Family::Q && parameter.fract() != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Q_k needs an integer k, got {parameter}"
            )));
        }
        Ok(Self { family, parameter })
    }

    pub fn q(k: i64) -> Self {
        Self {
            family: Family::Q,
            parameter: k as f64,
        }
    }

    pub fn p(lambda: f64) -> Self {
        Self {
            family: Family::P,
            parameter: lambda,
        }
    }

    pub fn r(lambda: f64) -> Self {
        Self {
            family: Family::R,
            parameter: lambda,
        }
    }

    pub fn q_shifted(lambda: f64) -> Self {
        Self {
            family: Family::QShifted,
            parameter: lambda,
        }
    }
}

/// Exact rational value of a finite `f64`.
pub fn exact_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidParameter(format!("{x} is not a finite number")))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn term2(a: i32, b: i32, c: BigRational) -> (Exponents, BigRational) {
    (vec![a, b], c)
}

fn q_with_rational_k(k: &BigRational) -> RationalPolynomial {
    let two_k = k.clone() * rat(2);
    LaurentPolynomial::from_terms(
        2,
        vec![
            term2(0, 2, rat(1)),
            term2(4, 1, rat(1)),
            term2(3, 1, k.clone()),
            term2(2, 1, two_k),
            term2(1, 1, k.clone()),
            term2(0, 1, rat(1)),
            term2(4, 0, rat(1)),
        ],
    )
    .expect("well-formed")
}

type RationalPolynomial = LaurentPolynomial<BigRational>;

/// Returns the family member as an exact polynomial in two variables
/// (index 0 is `x` or `X`, index 1 is `y` or `Y`).
pub fn make_family(spec: &FamilySpec) -> Result<RationalPolynomial> {
    let spec = FamilySpec::new(spec.family, spec.parameter)?;
    let lam = exact_rational(spec.parameter)?;
    let p = match spec.family {
        Family::Q => q_with_rational_k(&lam),
        Family::P => LaurentPolynomial::from_terms(
            2,
            vec![
                term2(1, 2, rat(1)),
                term2(0, 2, rat(1)),
                term2(2, 1, rat(1)),
                term2(1, 1, -(lam + rat(2))),
                term2(0, 1, rat(1)),
                term2(2, 0, rat(1)),
                term2(1, 0, rat(1)),
            ],
        )?,
        Family::R => LaurentPolynomial::from_terms(
            2,
            vec![
                term2(1, 0, rat(1)),
                term2(-1, 0, rat(1)),
                term2(0, 1, rat(1)),
                term2(0, -1, rat(1)),
                term2(0, 0, lam),
            ],
        )?,
        Family::QShifted => {
            let q = q_with_rational_k(&(lam + rat(4)));
            let x_minus_one = LaurentPolynomial::from_terms(
                2,
                vec![(vec![1, 0], rat(1)), (vec![0, 0], rat(-1))],
            )?;
            q.substitute(&[x_minus_one, LaurentPolynomial::var(2, 1)])?
        }
    };
    Ok(p)
}

/// The model `y² + (2x²+λx+1)y + x⁴` that `Q_{λ+4}(X-1,Y)` reduces to.
pub fn reduced_model(lambda: &BigRational) -> RationalPolynomial {
    LaurentPolynomial::from_terms(
        2,
        vec![
            term2(0, 2, rat(1)),
            term2(2, 1, rat(2)),
            term2(1, 1, lambda.clone()),
            term2(0, 1, rat(1)),
            term2(4, 0, rat(1)),
        ],
    )
    .expect("well-formed")
}

/// Outcome of [`verify_substitution`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubstitutionCheck {
    /// Largest `|LHS - RHS|` over the random torus points.
    pub max_residual: f64,
    /// Whether both sides expand to the same exact polynomial.
    pub exact_match: bool,
}

/// Checks `Q_{λ+4}(X-1,Y) = X⁸·(y²+(2x²+λx+1)y+x⁴)` with `x=(X-1)/X²`,
/// `y=Y/X⁴`, at `samples` random points of the torus and by exact expansion.
pub fn verify_substitution(lambda: f64, samples: usize) -> Result<SubstitutionCheck> {
    verify_substitution_seeded(lambda, samples, 0)
}

pub fn verify_substitution_seeded(
    lambda: f64,
    samples: usize,
    seed: u64,
) -> Result<SubstitutionCheck> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let lhs = make_family(&FamilySpec::q_shifted(lambda))?;
    let lam_q = exact_rational(lambda)?;

    // exact: substitute x -> (X-1) X^-2, y -> Y X^-4 and multiply by X^8
    let model = reduced_model(&lam_q);
    let x_img =
        LaurentPolynomial::from_terms(2, vec![(vec![-1, 0], rat(1)), (vec![-2, 0], rat(-1))])?;
    let y_img = LaurentPolynomial::monomial(2, vec![-4, 1], rat(1));
    let rhs = model.substitute(&[x_img, y_img])?.shift_monomial(&[8, 0]);
    let exact_match = rhs == lhs;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut max_residual: f64 = 0.0;
    for _ in 0..samples {
        let big_x = Complex::from_polar(1.0, two_pi * rng.gen::<f64>());
        let big_y = Complex::from_polar(1.0, two_pi * rng.gen::<f64>());
        let l = lhs.evaluate(&[big_x, big_y])?;
        let x = (big_x - 1.0) / (big_x * big_x);
        let y = big_y / big_x.powi(4);
        let inner = y * y + (x * x * 2.0 + x * lambda + 1.0) * y + x.powi(4);
        let r = big_x.powi(8) * inner;
        max_residual = max_residual.max((l - r).norm());
    }
    Ok(SubstitutionCheck {
        max_residual,
        exact_match,
    })
}

/// Evaluates `y² + (2x²+λx+1)y + x⁴` coefficients `(b, c)` at `x`.
pub fn reduced_model_coefficients<T: Real>(lambda: T, x: Complex<T>) -> (Complex<T>, Complex<T>) {
    let two: T = lit(2.0);
    let b = x * x * two + x * lambda + Complex::new(T::one(), T::zero());
    let x2 = x * x;
    (b, x2 * x2)
}
