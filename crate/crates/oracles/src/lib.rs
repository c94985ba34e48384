//! Slow reference implementations, kept deliberately naive and written
//! against the *definitions* rather than the optimized algorithms in
//! `qchir-core`. Tests compare the two routes on small instances; none of
//! this code is meant to be fast.

use qchir_core::{Isotopism, LatinSquare, Perm};

/// All permutations of degree `n` in lexicographic order of their image
/// vectors, by direct recursive construction.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut images: Vec<u8> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, images: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Perm>) {
        if images.len() == n {
            out.push(Perm::from_images(images.clone()).expect("constructed a permutation"));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                images.push(v as u8);
                rec(n, images, used, out);
                images.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut images, &mut used, &mut out);
    out
}

/// Applies an isotopism through the inverse formula
/// `R[x][y] = gamma(Q[alpha^{-1}(x)][beta^{-1}(y)])`, built cell by cell —
/// an independent route to the same action as `LatinSquare::apply`.
pub fn apply_inverse_formula(q: &LatinSquare, g: &Isotopism) -> LatinSquare {
    let n = q.order();
    assert_eq!(g.degree(), n, "isotopism degree must match the order");
    let ai = g.alpha().inverse();
    let bi = g.beta().inverse();
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            row.push(g.gamma().apply(q.get(ai.apply(x), bi.apply(y))) as i64);
        }
        rows.push(row);
    }
    LatinSquare::from_rows(&rows, false).expect("isotopy preserves the Latin property")
}

/// All isotopisms from `q` to `r` by brute force over every permutation
/// triple, testing the defining equation `r[alpha(x)][beta(y)] =
/// gamma(q[x][y])` at every cell. Sorted like the fast enumerator's output.
pub fn isotopisms_brute(q: &LatinSquare, r: &LatinSquare) -> Vec<Isotopism> {
    let n = q.order();
    assert_eq!(r.order(), n, "orders must match");
    let perms = all_perms(n);
    let mut out = Vec::new();
    for alpha in &perms {
        for beta in &perms {
            'gamma: for gamma in &perms {
                for x in 0..n {
                    for y in 0..n {
                        if r.get(alpha.apply(x), beta.apply(y)) != gamma.apply(q.get(x, y)) {
                            continue 'gamma;
                        }
                    }
                }
                out.push(
                    Isotopism::new(alpha.clone(), beta.clone(), gamma.clone())
                        .expect("matching degrees"),
                );
            }
        }
    }
    out.sort_unstable();
    out
}

/// All 2x2 subsquares by checking every (row pair, column pair) quadruple
/// against the definition: the four cells use exactly two symbols, each
/// appearing once per row and once per column of the subarray. Returned as
/// `(r1, r2, c1, c2)` with `r1 < r2`, `c1 < c2`, in lexicographic order.
pub fn intercalates_brute(q: &LatinSquare) -> Vec<(usize, usize, usize, usize)> {
    let n = q.order();
    let mut out = Vec::new();
    for r1 in 0..n {
        for r2 in (r1 + 1)..n {
            for c1 in 0..n {
                for c2 in (c1 + 1)..n {
                    let cells = [q.get(r1, c1), q.get(r1, c2), q.get(r2, c1), q.get(r2, c2)];
                    let mut symbols: Vec<usize> = cells.to_vec();
                    symbols.sort_unstable();
                    symbols.dedup();
                    let two_symbols = symbols.len() == 2;
                    let latin_rows = cells[0] != cells[1] && cells[2] != cells[3];
                    let latin_cols = cells[0] != cells[2] && cells[1] != cells[3];
                    if two_symbols && latin_rows && latin_cols {
                        out.push((r1, r2, c1, c2));
                    }
                }
            }
        }
    }
    out
}

/// All integer partitions of `n` as weakly decreasing part lists, largest
/// part first: `[n]`, `[n-1, 1]`, ..., `[1, 1, ..., 1]`.
pub fn partitions(n: usize) -> Vec<Vec<u8>> {
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part as u8);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Integrates the two-state master equation
/// `dp/dt = -k_q * p + k_qm * (1 - p)` with classical fourth-order
/// Runge-Kutta over `steps` equal steps — a reference for the closed form.
pub fn rk4_two_state(k_q: f64, k_qm: f64, p0: f64, t: f64, steps: u32) -> f64 {
    assert!(steps > 0, "need at least one step");
    let f = |p: f64| -k_q * p + k_qm * (1.0 - p);
    let h = t / f64::from(steps);
    let mut p = p0;
    for _ in 0..steps {
        let k1 = f(p);
        let k2 = f(p + 0.5 * h * k1);
        let k3 = f(p + 0.5 * h * k2);
        let k4 = f(p + h * k3);
        p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    p
}

/// Counts Latin squares of order `n` by depth-first search over rows, each
/// row drawn from the full permutation list and kept only when it avoids
/// every symbol already used in each column — a row-at-a-time decomposition,
/// unlike the cell-at-a-time stream it cross-checks.
pub fn count_latin_squares_rowperm(n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    let perms = all_perms(n);
    fn rec(n: usize, depth: usize, col_used: &mut [u32], perms: &[Perm]) -> u64 {
        if depth == n {
            return 1;
        }
        let mut total = 0;
        'perm: for p in perms {
            for (c, &s) in p.images().iter().enumerate() {
                if col_used[c] & (1 << s) != 0 {
                    continue 'perm;
                }
            }
            for (c, &s) in p.images().iter().enumerate() {
                col_used[c] |= 1 << s;
            }
            total += rec(n, depth + 1, col_used, perms);
            for (c, &s) in p.images().iter().enumerate() {
                col_used[c] &= !(1 << s);
            }
        }
        total
    }
    rec(n, 0, &mut vec![0u32; n], &perms)
}
