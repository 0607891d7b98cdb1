//! Matrix operators, Matrix Market I/O and the test-problem generators.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{Complex, Error, Result};

pub type Vector = Vec<Complex>;

/// Rows below this count use the sequential product.
const PAR_ROWS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub n: usize,
    /// Row-major.
    pub data: Vec<Complex>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex) {
        self.data[row * self.n + col] = value;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub offsets: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<Complex>,
}

impl CsrMatrix {
    /// Assembles an `n x n` matrix. Duplicate entries are summed and counted.
    pub fn from_triplets(
        n: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex)>,
    ) -> Result<(Self, usize)> {
        let mut rows: Vec<BTreeMap<usize, Complex>> = vec![BTreeMap::new(); n];
        let mut duplicates = 0;
        for (r, c, v) in triplets {
            if r >= n || c >= n {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows: n,
                    cols: n,
                });
            }
            if let Some(old) = rows[r].get_mut(&c) {
                *old += v;
                duplicates += 1;
            } else {
                rows[r].insert(c, v);
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        offsets.push(0);
        for row in rows {
            for (c, v) in row {
                indices.push(c);
                values.push(v);
            }
            offsets.push(indices.len());
        }
        Ok((
            Self {
                n,
                offsets,
                indices,
                values,
            },
            duplicates,
        ))
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex)> + '_ {
        let span = self.offsets[i]..self.offsets[i + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n);
        for (i, j, v) in self.triplets() {
            d.set(i, j, v);
        }
        d
    }

    fn row_dot(&self, i: usize, x: &[Complex]) -> Complex {
        self.row(i)
            .fold(Complex::new(0.0, 0.0), |acc, (j, v)| acc + v * x[j])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixOperator {
    Dense(DenseMatrix),
    Csr(CsrMatrix),
    Diagonal(Vec<Complex>),
}

impl MatrixOperator {
    pub fn dim(&self) -> usize {
        match self {
            Self::Dense(d) => d.n,
            Self::Csr(c) => c.n,
            Self::Diagonal(v) => v.len(),
        }
    }

    pub fn diagonal_real(values: &[f64]) -> Self {
        Self::Diagonal(values.iter().map(|&v| Complex::new(v, 0.0)).collect())
    }

    pub fn matvec(&self, x: &[Complex]) -> Result<Vector> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        Ok(match self {
            Self::Dense(d) => (0..n)
                .map(|i| {
                    d.data[i * n..(i + 1) * n]
                        .iter()
                        .zip(x)
                        .fold(Complex::new(0.0, 0.0), |acc, (a, b)| acc + a * b)
                })
                .collect(),
            Self::Csr(c) if n >= PAR_ROWS => {
                (0..n).into_par_iter().map(|i| c.row_dot(i, x)).collect()
            }
            Self::Csr(c) => (0..n).map(|i| c.row_dot(i, x)).collect(),
            Self::Diagonal(v) => v.iter().zip(x).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn to_csr(&self) -> CsrMatrix {
        match self {
            Self::Csr(c) => c.clone(),
            Self::Dense(d) => {
                let n = d.n;
                let trip = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter_map(|(i, j)| {
                        let v = d.get(i, j);
                        (v != Complex::new(0.0, 0.0)).then_some((i, j, v))
                    });
                CsrMatrix::from_triplets(n, trip)
                    .expect("indices in range")
                    .0
            }
            Self::Diagonal(v) => {
                let trip = v.iter().enumerate().map(|(i, &x)| (i, i, x));
                CsrMatrix::from_triplets(v.len(), trip)
                    .expect("indices in range")
                    .0
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Complex,
    Integer,
    Pattern,
}

/// Reads a coordinate-format Matrix Market stream into CSR.
pub fn parse_matrix_market<R: Read>(input: R) -> Result<MatrixOperator> {
    let reader = BufReader::new(input);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::BadHeader("empty input".into()))?;
    let header = header?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(Error::BadHeader(header));
    }
    if tokens[2] != "coordinate" {
        return Err(Error::BadHeader(format!(
            "unsupported format '{}'",
            tokens[2]
        )));
    }
    let field = match tokens[3].as_str() {
        "real" => Field::Real,
        "complex" => Field::Complex,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return Err(Error::BadHeader(format!("unsupported field '{other}'"))),
    };
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(Error::BadHeader(format!("unsupported symmetry '{other}'"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        let body = line.trim();
        if body.is_empty() || body.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = body.split_whitespace().collect();
        let perr = |msg: String| Error::Parse { line: lineno, msg };
        let Some((rows, cols, _)) = size else {
            if parts.len() != 3 {
                return Err(perr("expected 'rows cols nnz'".into()));
            }
            let nums: Vec<usize> = parts
                .iter()
                .map(|s| s.parse().map_err(|_| perr(format!("bad size token '{s}'"))))
                .collect::<Result<_>>()?;
            if nums[0] != nums[1] {
                return Err(Error::NonSquare {
                    rows: nums[0],
                    cols: nums[1],
                });
            }
            size = Some((nums[0], nums[1], nums[2]));
            continue;
        };
        let want = match field {
            Field::Pattern => 2,
            Field::Complex => 4,
            _ => 3,
        };
        if parts.len() != want {
            return Err(perr(format!("expected {want} fields, got {}", parts.len())));
        }
        let idx_of = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| perr(format!("bad index '{s}'")))
        };
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| perr(format!("bad value '{s}'")))
        };
        let (r, c) = (idx_of(parts[0])?, idx_of(parts[1])?);
        if r == 0 || c == 0 || r > rows || c > cols {
            return Err(Error::IndexOutOfRange {
                row: r,
                col: c,
                rows,
                cols,
            });
        }
        let value = match field {
            Field::Pattern => Complex::new(1.0, 0.0),
            Field::Complex => Complex::new(num(parts[2])?, num(parts[3])?),
            _ => Complex::new(num(parts[2])?, 0.0),
        };
        if !value.is_finite() {
            return Err(perr("non-finite value".into()));
        }
        triplets.push((r - 1, c - 1, value));
        if symmetric && r != c {
            triplets.push((c - 1, r - 1, value));
        }
    }
    let (n, _, declared) = size.ok_or_else(|| Error::BadHeader("missing size line".into()))?;
    let stored = if symmetric {
        triplets.len() - triplets.iter().filter(|(r, c, _)| r != c).count() / 2
    } else {
        triplets.len()
    };
    if stored != declared {
        log::warn!("Matrix Market header declares {declared} entries, found {stored}");
    }
    let (csr, duplicates) = CsrMatrix::from_triplets(n, triplets)?;
    if duplicates > 0 {
        log::warn!("summed {duplicates} duplicate Matrix Market entries");
    }
    Ok(MatrixOperator::Csr(csr))
}

/// Serializes as `coordinate real general`, or `complex` when any entry has
/// a nonzero imaginary part. Floats use shortest round-trip formatting.
pub fn write_matrix_market(a: &MatrixOperator) -> String {
    let csr = a.to_csr();
    let complex = csr.values.iter().any(|v| v.im != 0.0);
    let mut out = String::new();
    let field = if complex { "complex" } else { "real" };
    let _ = writeln!(out, "%%MatrixMarket matrix coordinate {field} general");
    let _ = writeln!(out, "{} {} {}", csr.n, csr.n, csr.nnz());
    for (i, j, v) in csr.triplets() {
        if complex {
            let _ = writeln!(out, "{} {} {:?} {:?}", i + 1, j + 1, v.re, v.im);
        } else {
            let _ = writeln!(out, "{} {} {:?}", i + 1, j + 1, v.re);
        }
    }
    out
}

/// The 4x4 matrix with eigenvalues `1.01, 1, i/2, -i/2`.
pub fn toy_matrix() -> MatrixOperator {
    let r = |x: f64| Complex::new(x, 0.0);
    let trip = [
        (0, 0, r(1.01)),
        (1, 1, r(1.0)),
        (2, 3, r(-0.5)),
        (3, 2, r(0.5)),
    ];
    MatrixOperator::Csr(CsrMatrix::from_triplets(4, trip).expect("static indices").0)
}

/// Directed barbell graph on `2N` vertices: two independent `G(N, p)`
/// halves without self-loops, joined by the edge `0 -> N`.
pub fn barbell(half: usize, p: f64, seed: u64) -> Result<MatrixOperator> {
    if half < 2 {
        return Err(Error::DomainError(format!(
            "barbell half size must be at least 2, got {half}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(format!(
            "edge probability must lie in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Complex::new(1.0, 0.0);
    let mut triplets = vec![(0, half, one)];
    // ordered off-diagonal pairs of one half, indexed 0..N(N-1)
    let pairs = half * (half - 1);
    for base in [0, half] {
        let mut add = |slot: usize| {
            let u = slot / (half - 1);
            let mut v = slot % (half - 1);
            if v >= u {
                v += 1;
            }
            triplets.push((base + u, base + v, one));
        };
        if p >= 1.0 {
            (0..pairs).for_each(&mut add);
        } else if p > 0.0 {
            // geometric gaps between successive successes
            let log_q = (1.0 - p).ln();
            let mut slot: usize = 0;
            loop {
                let u: f64 = rng.random::<f64>();
                let gap = ((1.0 - u).ln() / log_q).floor();
                if !gap.is_finite() || gap >= (pairs - slot) as f64 {
                    break;
                }
                slot += gap as usize;
                add(slot);
                slot += 1;
                if slot >= pairs {
                    break;
                }
            }
        }
    }
    Ok(MatrixOperator::Csr(
        CsrMatrix::from_triplets(2 * half, triplets)?.0,
    ))
}
