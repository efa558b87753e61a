//! Homogeneous linear systems over `Z/m`, used to enumerate multiplicative cocycles through
//! discrete logarithms.

use crate::error::{Error, Result};
use crate::exactalg::{FieldSpec, Scalar};

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Generators of the group `{ x in (Z/m)^n : A x = 0 }`.
///
/// Diagonalizes `A` by unimodular row and column operations carried out modulo `m`.
#[allow(clippy::needless_range_loop)]
pub fn kernel_generators(rows: &[Vec<i64>], n: usize, m: u64) -> Vec<Vec<u64>> {
    if m == 1 {
        return Vec::new();
    }
    let mi = m as i128;
    let md = |v: i128| v.rem_euclid(mi);
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| md(v as i128)).collect()).collect();
    let r = a.len();
    let mut v: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut t = 0;
    while t < r.min(n) {
        let Some((pi, pj)) = (t..r).flat_map(|i| (t..n).map(move |j| (i, j))).find(|&(i, j)| a[i][j] != 0) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..r {
                if a[i][t] == 0 {
                    continue;
                }
                let (p, q) = (a[t][t], a[i][t]);
                let (g, s, u) = if q % p == 0 { (p, 1, 0) } else { ext_gcd(p, q) };
                let (pg, qg) = (p / g, q / g);
                for j in 0..n {
                    let (x, y) = (a[t][j], a[i][j]);
                    a[t][j] = md(s * x + u * y);
                    a[i][j] = md(-qg * x + pg * y);
                }
                changed = true;
            }
            for j in t + 1..n {
                if a[t][j] == 0 {
                    continue;
                }
                let (p, q) = (a[t][t], a[t][j]);
                let (g, s, u) = if q % p == 0 { (p, 1, 0) } else { ext_gcd(p, q) };
                let (pg, qg) = (p / g, q / g);
                for row in a.iter_mut().chain(v.iter_mut()) {
                    let (x, y) = (row[t], row[j]);
                    row[t] = md(s * x + u * y);
                    row[j] = md(-qg * x + pg * y);
                }
                changed = true;
            }
            if !changed || ((t + 1..r).all(|i| a[i][t] == 0) && (t + 1..n).all(|j| a[t][j] == 0)) {
                break;
            }
        }
        t += 1;
    }
    let mut gens = Vec::new();
    for c in 0..n {
        let step = if c < t { m / gcd(a[c][c] as u64, m) } else { 1 };
        let g: Vec<u64> = (0..n).map(|i| (md(v[i][c] * step as i128)) as u64).collect();
        if g.iter().any(|&x| x != 0) {
            gens.push(g);
        }
    }
    gens
}

/// All elements of the subgroup of `(Z/m)^n` generated by `gens`, up to `cap` of them.
pub fn span_group(gens: &[Vec<u64>], n: usize, m: u64, cap: usize) -> Result<Vec<Vec<u64>>> {
    let zero = vec![0u64; n];
    let mut seen = std::collections::HashSet::from([zero.clone()]);
    let mut out = vec![zero];
    let mut i = 0;
    while i < out.len() {
        let cur = out[i].clone();
        for g in gens {
            let next: Vec<u64> = cur.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
            if seen.insert(next.clone()) {
                if out.len() >= cap {
                    return Err(Error::Capacity(format!("more than {cap} cocycles")));
                }
                out.push(next);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Discrete logarithms in the multiplicative group of a prime field.
#[derive(Clone, Debug)]
pub struct DiscreteLog {
    field: FieldSpec,
    p: u64,
    exp: Vec<u64>,
    log: Vec<u64>,
}

impl DiscreteLog {
    pub fn new(field: FieldSpec) -> Result<Self> {
        let FieldSpec::Prime(p) = field else {
            return Err(Error::Argument("discrete logarithms need a prime field".into()));
        };
        if p > 1 << 16 {
            return Err(Error::Capacity("prime too large for log tables".into()));
        }
        let order = p - 1;
        for g in 1..p {
            let mut exp = Vec::with_capacity(order as usize);
            let mut x = 1u64;
            for _ in 0..order {
                exp.push(x);
                x = x * g % p;
            }
            let mut log = vec![u64::MAX; p as usize];
            let mut ok = true;
            for (k, &e) in exp.iter().enumerate() {
                if log[e as usize] != u64::MAX {
                    ok = false;
                    break;
                }
                log[e as usize] = k as u64;
            }
            if ok {
                return Ok(DiscreteLog { field, p, exp, log });
            }
        }
        unreachable!("every prime field has a primitive root")
    }

    /// Order of the multiplicative group.
    pub fn order(&self) -> u64 {
        self.p - 1
    }

    pub fn log(&self, s: &Scalar) -> Option<u64> {
        let v = s.residue()?;
        (v != 0).then(|| self.log[v as usize])
    }

    pub fn exp(&self, k: u64) -> Scalar {
        self.field.from_i64(self.exp[(k % self.order()) as usize] as i64)
    }
}
