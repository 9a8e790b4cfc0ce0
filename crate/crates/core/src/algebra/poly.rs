//! Sparse multivariate polynomials over an exact field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::scalar::{Field, Rational};
use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

/// Polynomial stored as an exponent-vector to coefficient map over named variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<F: Field = Rational> {
    vars: Vec<String>,
    terms: BTreeMap<Exponent, F>,
}

pub type Poly = MultiPoly<Rational>;

impl<F: Field> MultiPoly<F> {
    pub fn zero(vars: &[impl AsRef<str>]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[impl AsRef<str>], c: F) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[impl AsRef<str>]) -> Self {
        Self::constant(vars, F::one())
    }

    /// The variable `name`, which must be one of `vars`.
    pub fn var(vars: &[impl AsRef<str>], name: &str) -> Result<Self> {
        let mut p = Self::zero(vars);
        let k = p
            .index_of(name)
            .ok_or_else(|| Error::Variables(format!("unknown variable `{name}`")))?;
        let mut e = vec![0; p.vars.len()];
        e[k] = 1;
        p.terms.insert(e, F::one());
        Ok(p)
    }

    pub fn var_index(vars: &[impl AsRef<str>], k: usize) -> Self {
        let mut p = Self::zero(vars);
        let mut e = vec![0; p.vars.len()];
        e[k] = 1;
        p.terms.insert(e, F::one());
        p
    }

    pub fn monomial(vars: &[impl AsRef<str>], exps: Exponent, c: F) -> Self {
        let mut p = Self::zero(vars);
        assert_eq!(exps.len(), p.vars.len(), "exponent length mismatch");
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Linear form `Σ coeffs[k]·vars[k] + constant`.
    pub fn linear(vars: &[impl AsRef<str>], coeffs: &[F], constant: F) -> Self {
        let mut p = Self::constant(vars, constant);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; p.vars.len()];
                e[k] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn from_terms(vars: &[impl AsRef<str>], terms: impl IntoIterator<Item = (Exponent, F)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, F> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, F> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> F {
        self.terms.get(exps).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coefficient(&vec![0; self.vars.len()])
    }

    /// Some(c) when the polynomial is the constant c.
    pub fn as_constant(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Adds `c·x^e` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, e: Exponent, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn degree_in(&self, k: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[k]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable that occurs with a nonzero exponent.
    pub fn with_vars(&self, vars: &[impl AsRef<str>]) -> Result<Self> {
        let new: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let mut map = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            map.push(new.iter().position(|w| w == v));
        }
        let mut out = MultiPoly { vars: new, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let mut ne = vec![0; out.vars.len()];
            for (k, &ek) in e.iter().enumerate() {
                if ek == 0 {
                    continue;
                }
                match map[k] {
                    Some(j) => ne[j] = ek,
                    None => {
                        return Err(Error::Variables(format!(
                            "variable `{}` missing from target list",
                            self.vars[k]
                        )))
                    }
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Union of the two variable lists, keeping `self`'s order first.
    pub fn merged_vars(&self, other: &Self) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = self.merged_vars(other);
        (
            self.with_vars(&vars).expect("superset"),
            other.with_vars(&vars).expect("superset"),
        )
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.mul_ref(c))).collect(),
        }
    }

    pub fn add_poly(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }

    pub fn sub_poly(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }

    pub fn mul_poly(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut out = Self::zero(&a.vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.mul_ref(cb));
            }
        }
        out
    }

    /// Product keeping only terms with `e <= bound` componentwise.
    pub fn mul_bounded(&self, other: &Self, bound: &[u32]) -> Self {
        debug_assert_eq!(self.vars, other.vars);
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            if ea.iter().zip(bound).any(|(x, b)| x > b) {
                continue;
            }
            for (eb, cb) in &other.terms {
                let mut ok = true;
                let mut e = Vec::with_capacity(ea.len());
                for k in 0..ea.len() {
                    let s = ea[k] + eb[k];
                    if s > bound[k] {
                        ok = false;
                        break;
                    }
                    e.push(s);
                }
                if ok {
                    out.add_term(e, ca.mul_ref(cb));
                }
            }
        }
        out
    }

    /// Product keeping only terms of total degree `<= max_deg`.
    pub fn mul_truncated(&self, other: &Self, max_deg: u32) -> Self {
        debug_assert_eq!(self.vars, other.vars);
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            if da > max_deg {
                continue;
            }
            for (eb, cb) in &other.terms {
                let db: u32 = eb.iter().sum();
                if da + db > max_deg {
                    continue;
                }
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn truncate_total_degree(&self, max_deg: u32) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate_box(&self, bound: &[u32]) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().zip(bound).all(|(x, b)| x <= b))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_poly(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_poly(&base);
            }
        }
        acc
    }

    /// Power with a signed exponent; negative exponents are rejected.
    pub fn pow_signed(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return Err(Error::NegativePower(e));
        }
        Ok(self.pow(e as u32))
    }

    pub fn pow_bounded(&self, e: u32, bound: &[u32]) -> Self {
        let mut acc = Self::one(&self.vars);
        let base = self.truncate_box(bound);
        for _ in 0..e {
            acc = acc.mul_bounded(&base, bound);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> MultiPoly<G> {
        let mut out = MultiPoly::<G>::zero(&self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Evaluates at a full point.
    pub fn eval(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.vars.len(), "point length mismatch");
        let mut powers: Vec<Vec<F>> = Vec::with_capacity(point.len());
        for (k, x) in point.iter().enumerate() {
            let maxd = self.degree_in(k).unwrap_or(0) as usize;
            let mut pw = Vec::with_capacity(maxd + 1);
            pw.push(F::one());
            for i in 1..=maxd {
                let next = pw[i - 1].mul_ref(x);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &ek) in e.iter().enumerate() {
                if ek > 0 {
                    t = t.mul_ref(&powers[k][ek as usize]);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes the constant `value` for variable `k`; the variable slot is kept.
    pub fn eval_var(&self, k: usize, value: &F) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let p = ne[k];
            ne[k] = 0;
            out.add_term(ne, c.mul_ref(&value.powi(p as i64).expect("nonnegative")));
        }
        out
    }

    /// Substitutes polynomials (over the same variable list `target_vars`) for every variable.
    pub fn compose(&self, images: &[MultiPoly<F>], target_vars: &[String]) -> Self {
        assert_eq!(images.len(), self.vars.len());
        let mut cache: Vec<Vec<MultiPoly<F>>> = images
            .iter()
            .map(|p| vec![MultiPoly::one(target_vars), p.with_vars(target_vars).expect("image vars")])
            .collect();
        let mut out = MultiPoly::zero(target_vars);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(target_vars, c.clone());
            for (k, &ek) in e.iter().enumerate() {
                while cache[k].len() <= ek as usize {
                    let next = cache[k].last().unwrap().mul_poly(&cache[k][1]);
                    cache[k].push(next);
                }
                if ek > 0 {
                    t = t.mul_poly(&cache[k][ek as usize]);
                }
            }
            out = out.add_poly(&t);
        }
        out
    }

    /// Substitutes `x_k -> x_k + shift_k` for every variable.
    pub fn shift(&self, shift: &[F]) -> Self {
        if shift.iter().all(|s| s.is_zero()) {
            return self.clone();
        }
        let images: Vec<MultiPoly<F>> = (0..self.vars.len())
            .map(|k| {
                let mut p = MultiPoly::var_index(&self.vars, k);
                p.add_term(vec![0; self.vars.len()], shift[k].clone());
                p
            })
            .collect();
        self.compose(&images, &self.vars.clone())
    }

    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[k] -= 1;
            out.add_term(ne, c.mul_ref(&F::from_i64(e[k] as i64)));
        }
        out
    }

    /// Permutes variable slots: the new slot `k` holds old slot `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let ne: Exponent = perm.iter().map(|&p| e[p]).collect();
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact division by a nonzero constant.
    pub fn div_scalar(&self, c: &F) -> Result<Self> {
        let inv = c.inv().ok_or(Error::DivisionByZero)?;
        Ok(self.scale(&inv))
    }
}

impl MultiPoly<Rational> {
    /// Parses a polynomial in the text format `3/2*x1^2*x2 - x3 + 5`.
    /// Unknown identifiers are appended to `vars` in order of appearance.
    pub fn parse(text: &str, vars: &[impl AsRef<str>]) -> Result<Self> {
        parse::Parser::new(text, vars.iter().map(|v| v.as_ref().to_string()).collect())?.parse_all()
    }

    /// Parses with the variable list restricted to `vars`.
    pub fn parse_strict(text: &str, vars: &[impl AsRef<str>]) -> Result<Self> {
        let p = Self::parse(text, vars)?;
        if p.vars.len() != vars.len() {
            let extra: Vec<&String> = p.vars[vars.len()..].iter().collect();
            return Err(Error::Parse(format!("unknown variables {extra:?}")));
        }
        Ok(p)
    }
}

/// `Σ_{k=0}^{bound} arg^k / k!`.
pub fn truncated_exp<F: Field>(arg: &MultiPoly<F>, nilpotency_bound: u32) -> MultiPoly<F> {
    let mut out = MultiPoly::one(arg.vars());
    let mut term = MultiPoly::one(arg.vars());
    for k in 1..=nilpotency_bound {
        term = term.mul_poly(arg).scale(&F::from_i64(k as i64).inv().expect("k > 0"));
        if term.is_zero() {
            break;
        }
        out = out.add_poly(&term);
    }
    out
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first, then reverse lexicographic exponent order
        let mut keys: Vec<&Exponent> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let (neg, mag) = c.term_parts();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        self.vars[j].clone()
                    } else {
                        format!("{}^{}", self.vars[j], k)
                    }
                })
                .collect();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.vars.join(","))
    }
}

impl<'a, 'b, F: Field> Add<&'b MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, rhs: &'b MultiPoly<F>) -> MultiPoly<F> {
        self.add_poly(rhs)
    }
}

impl<'a, 'b, F: Field> Sub<&'b MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, rhs: &'b MultiPoly<F>) -> MultiPoly<F> {
        self.sub_poly(rhs)
    }
}

impl<'a, 'b, F: Field> Mul<&'b MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, rhs: &'b MultiPoly<F>) -> MultiPoly<F> {
        self.mul_poly(rhs)
    }
}

impl<'a, F: Field> Neg for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        self.scale(&-F::one())
    }
}

mod parse {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(Rational),
        Ident(String),
        Op(char),
    }

    pub(super) struct Parser {
        toks: Vec<Tok>,
        pos: usize,
        vars: Vec<String>,
    }

    fn lex(text: &str) -> Result<Vec<Tok>> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Num(s.parse()?));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            } else if "+-*/^()".contains(c) {
                out.push(Tok::Op(c));
                i += 1;
            } else {
                return Err(Error::Parse(format!("unexpected character `{c}` at {i}")));
            }
        }
        Ok(out)
    }

    impl Parser {
        pub(super) fn new(text: &str, vars: Vec<String>) -> Result<Self> {
            let toks = lex(text)?;
            let mut vars = vars;
            for t in &toks {
                if let Tok::Ident(name) = t {
                    if !vars.contains(name) {
                        vars.push(name.clone());
                    }
                }
            }
            Ok(Parser { toks, pos: 0, vars })
        }

        pub(super) fn parse_all(mut self) -> Result<Poly> {
            if self.toks.is_empty() {
                return Err(Error::Parse("empty polynomial".into()));
            }
            let p = self.expr()?;
            if self.pos != self.toks.len() {
                return Err(Error::Parse(format!("trailing input at token {}", self.pos)));
            }
            Ok(p)
        }

        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.pos)
        }

        fn eat(&mut self, op: char) -> bool {
            if self.peek() == Some(&Tok::Op(op)) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        fn expr(&mut self) -> Result<Poly> {
            let mut acc = if self.eat('-') {
                -&self.term()?
            } else {
                self.eat('+');
                self.term()?
            };
            loop {
                if self.eat('+') {
                    acc = &acc + &self.term()?;
                } else if self.eat('-') {
                    acc = &acc - &self.term()?;
                } else {
                    return Ok(acc);
                }
            }
        }

        fn term(&mut self) -> Result<Poly> {
            let mut acc = self.power()?;
            loop {
                if self.eat('*') {
                    acc = &acc * &self.power()?;
                } else if self.eat('/') {
                    let d = self.power()?;
                    let c = d
                        .as_constant()
                        .ok_or_else(|| Error::Parse("division by a non-constant".into()))?;
                    acc = acc.div_scalar(&c)?;
                } else {
                    return Ok(acc);
                }
            }
        }

        fn power(&mut self) -> Result<Poly> {
            let base = self.atom()?;
            if self.eat('^') {
                match self.toks.get(self.pos).cloned() {
                    Some(Tok::Num(n)) => {
                        self.pos += 1;
                        let e = n
                            .to_i64()
                            .filter(|&e| e >= 0)
                            .ok_or_else(|| Error::Parse(format!("bad exponent {n}")))?;
                        Ok(base.pow(e as u32))
                    }
                    Some(Tok::Op('-')) => Err(Error::NegativePower(-1)),
                    _ => Err(Error::Parse("exponent must be a non-negative integer".into())),
                }
            } else {
                Ok(base)
            }
        }

        fn atom(&mut self) -> Result<Poly> {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    Ok(Poly::constant(&self.vars, n))
                }
                Some(Tok::Ident(name)) => {
                    self.pos += 1;
                    Poly::var(&self.vars, &name)
                }
                Some(Tok::Op('(')) => {
                    self.pos += 1;
                    let p = self.expr()?;
                    if !self.eat(')') {
                        return Err(Error::Parse("missing `)`".into()));
                    }
                    Ok(p)
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    Ok(-&self.power()?)
                }
                other => Err(Error::Parse(format!("unexpected token {other:?}"))),
            }
        }
    }
}
