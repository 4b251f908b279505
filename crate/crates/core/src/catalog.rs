//! Coxeter matrices of the standard families.
//!
//! Generators are numbered along the Dynkin diagram; for `B_n` the bond of
//! order 4 sits between the last two nodes, for `D_n` the last node branches
//! off the third-to-last one.

use crate::datum::{from_coxeter_matrix, CoxeterDatum, CoxeterMatrix};

fn path(n: usize, last_bond: u32) -> Vec<Vec<u32>> {
    let mut rows = vec![vec![2u32; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1;
    }
    for i in 1..n {
        let m = if i == n - 1 { last_bond } else { 3 };
        rows[i - 1][i] = m;
        rows[i][i - 1] = m;
    }
    rows
}

fn build(rows: Vec<Vec<u32>>) -> CoxeterMatrix {
    CoxeterMatrix::from_rows(rows).expect("catalog matrices are well formed")
}

/// `A_n`, `n >= 1`.
pub fn a(n: usize) -> CoxeterMatrix {
    assert!(n >= 1);
    build(path(n, 3))
}

/// `B_n`, `n >= 2`.
pub fn b(n: usize) -> CoxeterMatrix {
    assert!(n >= 2);
    build(path(n, 4))
}

/// `D_n`, `n >= 4`.
pub fn d(n: usize) -> CoxeterMatrix {
    assert!(n >= 4);
    let mut rows = path(n - 1, 3);
    for row in rows.iter_mut() {
        row.push(2);
    }
    let mut last = vec![2u32; n];
    last[n - 1] = 1;
    last[n - 3] = 3;
    rows[n - 3][n - 1] = 3;
    rows.push(last);
    build(rows)
}

/// `H_3`, with the order-5 bond between the first two generators.
pub fn h(n: usize) -> CoxeterMatrix {
    assert!(n == 3 || n == 4);
    let mut rows = path(n, 3);
    rows[0][1] = 5;
    rows[1][0] = 5;
    build(rows)
}

/// Dihedral group of order `2m`; `m = 0` gives the infinite dihedral group.
pub fn i2(m: u32) -> CoxeterMatrix {
    build(vec![vec![1, m], vec![m, 1]])
}

pub fn infinite_dihedral() -> CoxeterMatrix {
    i2(0)
}

/// Looks a family up by name: `A3`, `B4`, `D4`, `H3`, `I2(5)`, `Iinf`.
pub fn by_name(name: &str) -> Option<CoxeterMatrix> {
    let name = name.trim();
    if name.eq_ignore_ascii_case("iinf") || name.eq_ignore_ascii_case("i2(inf)") {
        return Some(infinite_dihedral());
    }
    if let Some(inner) = name
        .strip_prefix("I2(")
        .or_else(|| name.strip_prefix("i2("))
        .and_then(|r| r.strip_suffix(')'))
    {
        return inner.parse().ok().filter(|&m| m >= 2).map(i2);
    }
    let (family, rank) = name.split_at(1);
    let n: usize = rank.parse().ok()?;
    match family {
        "A" | "a" if n >= 1 => Some(a(n)),
        "B" | "b" if n >= 2 => Some(b(n)),
        "D" | "d" if n >= 4 => Some(d(n)),
        "H" | "h" if n == 3 || n == 4 => Some(h(n)),
        _ => None,
    }
}

/// The standard datum of a named family.
pub fn standard(name: &str) -> Option<CoxeterDatum> {
    by_name(name).map(|m| from_coxeter_matrix(&m).expect("catalog data are valid"))
}
