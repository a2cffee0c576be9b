//! Text format for permutation-invariant Pauli Hamiltonians.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ['-'] [coeff '*'] body
//! coeff  := decimal | decimal '/' decimal | '1/sqrt(' decimal ')' | 'sqrt(' decimal ')'
//! body   := 'sym(' factor+ ')' | factor ('x' factor)* | 'H(' i ',' j ')'
//! factor := 'I' | 'X' | 'Y' | 'Z' | 'P0' | 'P1'
//! ```
//!
//! Whitespace is ignored, so `sym(XZP0)` and `X x Y` both parse. `sym`
//! sums its factors over all distinct orderings; `H(i,j)` is
//! `(σ_i ⊗ σ_j + σ_j ⊗ σ_i) / 2` with `σ_0 = I`, `σ_1..σ_3 = X, Y, Z`.
//!
//! Matrices use the full-register bit order: qubit 0 is the most
//! significant bit of the basis index.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, StellarError};

/// Largest register for which a dense matrix is built.
pub const MAX_HAM_QUBITS: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliFactor {
    I,
    X,
    Y,
    Z,
    /// `|0><0|`
    P0,
    /// `|1><1|`
    P1,
}

impl PauliFactor {
    pub const ALL: [PauliFactor; 6] =
        [PauliFactor::I, PauliFactor::X, PauliFactor::Y, PauliFactor::Z, PauliFactor::P0, PauliFactor::P1];

    /// `σ_i` for `i` in `0..4`.
    pub fn sigma(i: u8) -> Option<PauliFactor> {
        [PauliFactor::I, PauliFactor::X, PauliFactor::Y, PauliFactor::Z].get(i as usize).copied()
    }

    /// Image of basis bit `b`: `(amplitude, output bit)`.
    fn apply(self, b: usize) -> (Complex64, usize) {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match (self, b) {
            (PauliFactor::I, b) => (one, b),
            (PauliFactor::X, b) => (one, 1 - b),
            (PauliFactor::Y, 0) => (Complex64::i(), 1),
            (PauliFactor::Y, _) => (-Complex64::i(), 0),
            (PauliFactor::Z, 0) => (one, 0),
            (PauliFactor::Z, _) => (-one, 1),
            (PauliFactor::P0, 0) => (one, 0),
            (PauliFactor::P1, 1) => (one, 1),
            (_, b) => (zero, b),
        }
    }
}

impl fmt::Display for PauliFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PauliFactor::I => "I",
            PauliFactor::X => "X",
            PauliFactor::Y => "Y",
            PauliFactor::Z => "Z",
            PauliFactor::P0 => "P0",
            PauliFactor::P1 => "P1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coeff {
    Decimal(f64),
    Ratio(f64, f64),
    /// `1/sqrt(d)`
    InvSqrt(f64),
    /// `sqrt(d)`
    Sqrt(f64),
}

impl Coeff {
    pub fn value(&self) -> f64 {
        match *self {
            Coeff::Decimal(v) => v,
            Coeff::Ratio(a, b) => a / b,
            Coeff::InvSqrt(d) => 1.0 / d.sqrt(),
            Coeff::Sqrt(d) => d.sqrt(),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Decimal(v) => write!(f, "{v}"),
            Coeff::Ratio(a, b) => write!(f, "{a}/{b}"),
            Coeff::InvSqrt(d) => write!(f, "1/sqrt({d})"),
            Coeff::Sqrt(d) => write!(f, "sqrt({d})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Product(Vec<PauliFactor>),
    Sym(Vec<PauliFactor>),
    /// `H(i, j)`
    Pair(u8, u8),
}

impl Body {
    pub fn arity(&self) -> usize {
        match self {
            Body::Product(f) | Body::Sym(f) => f.len(),
            Body::Pair(..) => 2,
        }
    }

    /// The body as a sum of plain tensor products with weights.
    pub fn expand(&self) -> Vec<(f64, Vec<PauliFactor>)> {
        match self {
            Body::Product(f) => vec![(1.0, f.clone())],
            Body::Sym(f) => distinct_permutations(f).into_iter().map(|p| (1.0, p)).collect(),
            Body::Pair(i, j) => {
                let (a, b) = (
                    PauliFactor::sigma(*i).unwrap_or(PauliFactor::I),
                    PauliFactor::sigma(*j).unwrap_or(PauliFactor::I),
                );
                vec![(0.5, vec![a, b]), (0.5, vec![b, a])]
            }
        }
    }
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |fs: &[PauliFactor], sep: &str| fs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep);
        match self {
            Body::Product(fs) => f.write_str(&join(fs, " x ")),
            Body::Sym(fs) => write!(f, "sym({})", join(fs, " ")),
            Body::Pair(i, j) => write!(f, "H({i},{j})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    /// Operator joining this term to the previous one; `Plus` for the first.
    pub sign: Sign,
    /// Unary minus in front of the term.
    pub negated: bool,
    pub coeff: Option<Coeff>,
    pub body: Body,
}

impl Term {
    pub fn weight(&self) -> f64 {
        let mut w = self.coeff.map_or(1.0, |c| c.value());
        if self.negated {
            w = -w;
        }
        if self.sign == Sign::Minus {
            w = -w;
        }
        w
    }
}

/// Parsed Hamiltonian expression.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianExpr {
    pub terms: Vec<Term>,
}

impl HamiltonianExpr {
    /// Number of qubits, shared by all terms.
    pub fn arity(&self) -> usize {
        self.terms.first().map_or(0, |t| t.body.arity())
    }

    /// True when every term is a `sym(...)` or `H(i,j)` body.
    pub fn is_manifestly_symmetric(&self) -> bool {
        self.terms.iter().all(|t| matches!(t.body, Body::Sym(_) | Body::Pair(..)))
    }
}

impl fmt::Display for HamiltonianExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, t) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(if t.sign == Sign::Minus { " - " } else { " + " })?;
            }
            if t.negated {
                f.write_str("-")?;
            }
            if let Some(c) = &t.coeff {
                write!(f, "{c}*")?;
            }
            write!(f, "{}", t.body)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for HamiltonianExpr {
    type Err = StellarError;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// All distinct orderings of a multiset, in lexicographic order.
fn distinct_permutations(factors: &[PauliFactor]) -> Vec<Vec<PauliFactor>> {
    let mut cur = factors.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    while let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) {
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("a larger element exists after i");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Factor(PauliFactor),
    Sym,
    Sqrt,
    H,
    Tensor,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    End,
}

#[derive(Debug, Clone)]
struct Lexeme {
    tok: Tok,
    text: String,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Lexeme>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    let err = |line, column, token: String, msg: &str| StellarError::Parse { line, column, token, msg: msg.into() };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let starts = |word: &str| chars[i..].iter().take(word.len()).copied().eq(word.chars());
        let (tok, len) = if c.is_ascii_digit() || c == '.' {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j < chars.len() && chars[j] == '.' {
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            let text: String = chars[i..j].iter().collect();
            let v: f64 = text.parse().map_err(|_| err(line, col, text.clone(), "malformed number"))?;
            (Tok::Num(v), j - i)
        } else if starts("sym") {
            (Tok::Sym, 3)
        } else if starts("sqrt") {
            (Tok::Sqrt, 4)
        } else if starts("P0") {
            (Tok::Factor(PauliFactor::P0), 2)
        } else if starts("P1") {
            (Tok::Factor(PauliFactor::P1), 2)
        } else {
            let tok = match c {
                'I' => Tok::Factor(PauliFactor::I),
                'X' => Tok::Factor(PauliFactor::X),
                'Y' => Tok::Factor(PauliFactor::Y),
                'Z' => Tok::Factor(PauliFactor::Z),
                'H' => Tok::H,
                'x' => Tok::Tensor,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => {
                    let word: String = chars[i..].iter().take_while(|c| c.is_alphanumeric() || **c == '_').collect();
                    let token = if word.is_empty() { c.to_string() } else { word };
                    return Err(err(
                        line,
                        col,
                        token,
                        "unknown symbol; expected a factor I X Y Z P0 P1, sym, sqrt or H",
                    ));
                }
            };
            (tok, 1)
        };
        out.push(Lexeme { tok, text: chars[i..i + len].iter().collect(), line, column: col });
        i += len;
        col += len;
    }
    out.push(Lexeme { tok: Tok::End, text: "end of input".into(), line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexeme>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Lexeme {
        let l = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        l
    }

    fn error_here(&self, msg: &str) -> StellarError {
        let l = &self.toks[self.pos];
        StellarError::Parse { line: l.line, column: l.column, token: l.text.clone(), msg: msg.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Lexeme> {
        if *self.peek() == tok {
            Ok(self.next())
        } else {
            Err(self.error_here(&format!("expected {what}")))
        }
    }

    fn number(&mut self) -> Result<f64> {
        match *self.peek() {
            Tok::Num(v) => {
                self.next();
                Ok(v)
            }
            _ => Err(self.error_here("expected a number")),
        }
    }

    fn factor(&mut self) -> Result<PauliFactor> {
        match *self.peek() {
            Tok::Factor(f) => {
                self.next();
                Ok(f)
            }
            _ => Err(self.error_here("expected a factor I X Y Z P0 P1")),
        }
    }

    fn sqrt_arg(&mut self) -> Result<f64> {
        self.expect(Tok::Sqrt, "sqrt")?;
        self.expect(Tok::LParen, "'('")?;
        let v = self.number()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(v)
    }

    fn coeff(&mut self) -> Result<Coeff> {
        if *self.peek() == Tok::Sqrt {
            return Ok(Coeff::Sqrt(self.sqrt_arg()?));
        }
        let v = self.number()?;
        if *self.peek() != Tok::Slash {
            return Ok(Coeff::Decimal(v));
        }
        self.next();
        if *self.peek() == Tok::Sqrt {
            if v != 1.0 {
                return Err(self.error_here("only 1/sqrt(d) is allowed"));
            }
            return Ok(Coeff::InvSqrt(self.sqrt_arg()?));
        }
        Ok(Coeff::Ratio(v, self.number()?))
    }

    fn body(&mut self) -> Result<Body> {
        match *self.peek() {
            Tok::Sym => {
                self.next();
                self.expect(Tok::LParen, "'(' after sym")?;
                let mut fs = vec![self.factor()?];
                while let Tok::Factor(_) = self.peek() {
                    fs.push(self.factor()?);
                }
                self.expect(Tok::RParen, "')' closing sym")?;
                Ok(Body::Sym(fs))
            }
            Tok::H => {
                self.next();
                self.expect(Tok::LParen, "'(' after H")?;
                let i = self.index()?;
                self.expect(Tok::Comma, "','")?;
                let j = self.index()?;
                self.expect(Tok::RParen, "')' closing H")?;
                Ok(Body::Pair(i, j))
            }
            _ => {
                let mut fs = vec![self.factor()?];
                while *self.peek() == Tok::Tensor {
                    self.next();
                    fs.push(self.factor()?);
                }
                Ok(Body::Product(fs))
            }
        }
    }

    fn index(&mut self) -> Result<u8> {
        let at = self.pos;
        let v = self.number()?;
        if v.fract() != 0.0 || !(0.0..=3.0).contains(&v) {
            self.pos = at;
            return Err(self.error_here("Pauli index must be 0, 1, 2 or 3"));
        }
        Ok(v as u8)
    }

    fn term(&mut self, sign: Sign) -> Result<Term> {
        let negated = if *self.peek() == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let coeff = if matches!(self.peek(), Tok::Num(_) | Tok::Sqrt) {
            let c = self.coeff()?;
            self.expect(Tok::Star, "'*' after coefficient")?;
            Some(c)
        } else {
            None
        };
        let body = self.body()?;
        Ok(Term { sign, negated, coeff, body })
    }
}

/// Parses an expression and checks that all terms share one arity.
pub fn parse(src: &str) -> Result<HamiltonianExpr> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let mut terms = Vec::new();
    let mut starts = Vec::new();
    starts.push(p.pos);
    terms.push(p.term(Sign::Plus)?);
    loop {
        let sign = match p.peek() {
            Tok::Plus => Sign::Plus,
            Tok::Minus => Sign::Minus,
            Tok::End => break,
            _ => return Err(p.error_here("expected '+', '-' or end of input")),
        };
        p.next();
        starts.push(p.pos);
        terms.push(p.term(sign)?);
    }
    let n = terms[0].body.arity();
    for (t, &at) in terms.iter().zip(&starts) {
        let bad = if t.body.arity() != n {
            Some(format!("term has {} factors but the first term has {n}", t.body.arity()))
        } else if let Some(Coeff::Ratio(_, b)) = t.coeff {
            (b == 0.0).then(|| "division by zero in coefficient".to_string())
        } else {
            None
        };
        if let Some(msg) = bad {
            let l = &p.toks[at];
            return Err(StellarError::Parse { line: l.line, column: l.column, token: l.text.clone(), msg });
        }
    }
    Ok(HamiltonianExpr { terms })
}

/// Dense Hermitian matrix on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    n: usize,
    matrix: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Checks the shape and Hermiticity (to `1e-12`) of a given matrix.
    pub fn new(n: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        const OP: &str = "HermitianOperator::new";
        if n == 0 || n > MAX_HAM_QUBITS {
            return Err(StellarError::resource(OP, format!("qubit count {n} outside 1..={MAX_HAM_QUBITS}")));
        }
        if matrix.nrows() != 1 << n || matrix.ncols() != 1 << n {
            return Err(StellarError::domain(OP, format!("matrix must be {0}x{0}", 1usize << n)));
        }
        let op = HermitianOperator { n, matrix };
        let deficit = op.hermiticity_deficit();
        if deficit > 1e-12 {
            return Err(StellarError::numeric(OP, format!("not Hermitian, deficit {deficit:.3e}")));
        }
        Ok(op)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `max |H - H^†|`.
    pub fn hermiticity_deficit(&self) -> f64 {
        let m = &self.matrix;
        let d = m.nrows();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `max |P H P - H|` over transpositions of neighbouring qubits, which
    /// generate all qubit permutations.
    pub fn permutation_deficit(&self) -> f64 {
        let m = &self.matrix;
        let dim = m.nrows();
        let mut worst = 0.0f64;
        for q in 0..self.n.saturating_sub(1) {
            let swap = |idx: usize| crate::state::swap_qubits(idx, self.n, q, q + 1);
            for c in 0..dim {
                let sc = swap(c);
                for r in 0..dim {
                    worst = worst.max((m[(swap(r), sc)] - m[(r, c)]).norm());
                }
            }
        }
        worst
    }
}

/// Dense matrix of a parsed expression.
pub fn build_matrix(expr: &HamiltonianExpr) -> Result<HermitianOperator> {
    const OP: &str = "build_matrix";
    let n = expr.arity();
    if n == 0 {
        return Err(StellarError::domain(OP, "empty expression"));
    }
    if n > MAX_HAM_QUBITS {
        return Err(StellarError::resource(OP, format!("{n} qubits exceeds the limit of {MAX_HAM_QUBITS}")));
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for t in &expr.terms {
        let w = t.weight();
        for (inner, factors) in t.body.expand() {
            let scale = w * inner;
            for col in 0..dim {
                let mut amp = Complex64::new(scale, 0.0);
                let mut row = 0usize;
                for (q, f) in factors.iter().enumerate() {
                    let shift = n - 1 - q;
                    let (a, b) = f.apply((col >> shift) & 1);
                    amp *= a;
                    row |= b << shift;
                }
                if amp != Complex64::new(0.0, 0.0) {
                    m[(row, col)] += amp;
                }
            }
        }
    }
    HermitianOperator::new(n, m)
}

/// Parses and builds in one step.
pub fn hamiltonian(src: &str) -> Result<HermitianOperator> {
    build_matrix(&parse(src)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pair_shorthand_is_symmetrized_product() {
        let h = hamiltonian("H(0,3)").unwrap();
        // (I x Z + Z x I)/2 = diag(1, 0, 0, -1)
        let expected = [1.0, 0.0, 0.0, -1.0];
        for (r, diag) in expected.iter().enumerate() {
            for col in 0..4 {
                let e = if r == col { *diag } else { 0.0 };
                assert_eq!(h.matrix()[(r, col)], c(e, 0.0));
            }
        }
    }

    #[test]
    fn xy_plus_yx_maps_00_to_11() {
        let h = hamiltonian("-1*X x Y + -1*Y x X").unwrap();
        assert_eq!(h.matrix()[(3, 0)], c(0.0, -2.0));
        assert!(h.matrix().column(0).iter().enumerate().all(|(r, v)| r == 3 || v.norm() == 0.0));
    }

    #[test]
    fn sym_counts_distinct_arrangements() {
        let e = parse("sym(X Z P0)").unwrap();
        assert_eq!(e.terms[0].body.expand().len(), 6);
        assert_eq!(parse("sym(X X Z)").unwrap().terms[0].body.expand().len(), 3);
        let h = build_matrix(&e).unwrap();
        assert!(h.permutation_deficit() < 1e-15);
        assert!(hamiltonian("X x Z x P0").unwrap().permutation_deficit() > 0.5);
    }

    #[test]
    fn coefficient_forms() {
        let e = parse("1/sqrt(2)*H(2,3) + 1/sqrt(2)*H(0,2) - 3/4*X x X + sqrt(2)*Z x Z - -0.5*I x I").unwrap();
        let w: Vec<f64> = e.terms.iter().map(Term::weight).collect();
        let r = 0.5f64.sqrt();
        assert!((w[0] - r).abs() < 1e-15 && (w[1] - r).abs() < 1e-15);
        assert_eq!(w[2], -0.75);
        assert_eq!(w[3], 2f64.sqrt());
        assert_eq!(w[4], 0.5);
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(parse("sym(XZP0)").unwrap(), parse(" sym( X Z P0 ) ").unwrap());
        assert_eq!(parse("XxY").unwrap(), parse("X x Y").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        match parse("X x Q") {
            Err(StellarError::Parse { line, column, token, .. }) => {
                assert_eq!((line, column, token.as_str()), (1, 5, "Q"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse("X x Y +\n  Z") {
            Err(StellarError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("H(0,4)"), Err(StellarError::Parse { .. })));
        assert!(matches!(parse("X x"), Err(StellarError::Parse { .. })));
        assert!(matches!(parse("1/0*X"), Err(StellarError::Parse { .. })));
        let big = vec!["X"; 15].join(" x ");
        assert!(matches!(hamiltonian(&big), Err(StellarError::Resource { .. })));
    }
}
