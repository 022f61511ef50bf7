//! Brute-force reference implementations shared by the integration tests.
//! They deliberately avoid the library's algorithms.
#![allow(dead_code)]

use pkinv::oracle::EnergyModel;
use pkinv::sequence::{BasePair, Sequence};
use pkinv::structure::Structure;

pub type Arcs = Vec<(usize, usize)>;

pub fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

/// Largest mutually crossing subset, by trying every subset.
pub fn crossing_number_brute(arcs: &[(usize, usize)]) -> usize {
    let m = arcs.len();
    assert!(m <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << m) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let members: Vec<usize> = (0..m).filter(|&x| mask >> x & 1 == 1).collect();
        let clique = members
            .iter()
            .enumerate()
            .all(|(k, &x)| members[k + 1..].iter().all(|&y| crosses(arcs[x], arcs[y])));
        if clique {
            best = size;
        }
    }
    best
}

/// Whether some 2-colouring of the arcs leaves no crossing pair monochrome.
pub fn two_page_brute(arcs: &[(usize, usize)]) -> bool {
    let m = arcs.len();
    (0u32..(1 << m)).any(|mask| {
        (0..m).all(|x| {
            (x + 1..m).all(|y| !crosses(arcs[x], arcs[y]) || (mask >> x & 1) != (mask >> y & 1))
        })
    })
}

/// All perfect matchings on the points `1..=2a`.
pub fn perfect_matchings(a: usize) -> Vec<Arcs> {
    fn go(free: &mut Vec<usize>, cur: &mut Arcs, out: &mut Vec<Arcs>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let first = free.remove(0);
        for k in 0..free.len() {
            let partner = free.remove(k);
            cur.push((first, partner));
            go(free, cur, out);
            cur.pop();
            free.insert(k, partner);
        }
        free.insert(0, first);
    }
    let mut out = Vec::new();
    go(&mut (1..=2 * a).collect(), &mut Vec::new(), &mut out);
    out
}

/// Visits every diagram on `n` positions whose arcs have length ≥ `min_len`
/// and satisfy `allow`.
pub fn for_each_diagram<F: FnMut(&[(usize, usize)])>(
    n: usize,
    min_len: usize,
    allow: &dyn Fn(usize, usize) -> bool,
    visit: &mut F,
) {
    fn go<F: FnMut(&[(usize, usize)])>(
        p: usize,
        n: usize,
        min_len: usize,
        used: &mut Vec<bool>,
        arcs: &mut Arcs,
        allow: &dyn Fn(usize, usize) -> bool,
        visit: &mut F,
    ) {
        if p > n {
            visit(arcs);
            return;
        }
        if used[p] {
            go(p + 1, n, min_len, used, arcs, allow, visit);
            return;
        }
        go(p + 1, n, min_len, used, arcs, allow, visit);
        for j in p + min_len..=n {
            if used[j] || !allow(p, j) {
                continue;
            }
            used[p] = true;
            used[j] = true;
            arcs.push((p, j));
            go(p + 1, n, min_len, used, arcs, allow, visit);
            arcs.pop();
            used[p] = false;
            used[j] = false;
        }
    }
    go(
        1,
        n,
        min_len,
        &mut vec![false; n + 2],
        &mut Vec::new(),
        allow,
        visit,
    );
}

pub fn partner_of(arcs: &[(usize, usize)], n: usize) -> Vec<usize> {
    let mut p = vec![0; n + 2];
    for &(i, j) in arcs {
        p[i] = j;
        p[j] = i;
    }
    p
}

/// Sizes of the maximal stacks, computed from the partner table.
pub fn stack_sizes(arcs: &[(usize, usize)], n: usize) -> Vec<usize> {
    let p = partner_of(arcs, n);
    arcs.iter()
        .filter(|&&(i, j)| !(i > 1 && p[i - 1] == j + 1))
        .map(|&(i, j)| {
            let mut size = 1;
            while p[i + size] == j - size && i + size < j - size {
                size += 1;
            }
            size
        })
        .collect()
}

/// The admissibility filter applied to a raw diagram.
pub fn admissible(
    arcs: &[(usize, usize)],
    n: usize,
    k: usize,
    sigma: usize,
    lambda: usize,
) -> bool {
    arcs.iter().all(|&(i, j)| j - i >= lambda)
        && stack_sizes(arcs, n).iter().all(|&s| s >= sigma)
        && crossing_number_brute(arcs) < k
}

/// Arcs minimal (under strict nesting) among those crossing some arc,
/// grouped into crossing-connected components.
pub fn knots_brute(arcs: &[(usize, usize)]) -> usize {
    let m = arcs.len();
    let nested = |x: (usize, usize), y: (usize, usize)| y.0 < x.0 && x.1 < y.1;
    let mut member = vec![false; m];
    for b in 0..m {
        let crossing: Vec<usize> = (0..m).filter(|&x| crosses(arcs[x], arcs[b])).collect();
        for &x in &crossing {
            if !crossing.iter().any(|&y| nested(arcs[y], arcs[x])) {
                member[x] = true;
            }
        }
    }
    // union-find over crossing members
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for x in 0..m {
        for y in 0..m {
            if member[x] && member[y] && crosses(arcs[x], arcs[y]) {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                parent[rx] = ry;
            }
        }
    }
    let mut roots: Vec<usize> = (0..m)
        .filter(|&x| member[x])
        .map(|x| find(&mut parent, x))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

pub fn energy_brute(seq: &Sequence, arcs: &[(usize, usize)], model: &EnergyModel) -> f64 {
    let n = seq.len();
    let p = partner_of(arcs, n);
    let pair = |i: usize, j: usize| BasePair::new(seq.base(i), seq.base(j)).expect("compatible");
    let mut e = 0.0;
    for &(i, j) in arcs {
        if p[i + 1] == j - 1 && i + 1 < j - 1 {
            e += model.stack_score(pair(i, j), pair(i + 1, j - 1));
        }
    }
    let unpaired = n - 2 * arcs.len();
    e + model.unpaired_penalty * unpaired as f64
        + model.pseudoknot_penalty * knots_brute(arcs) as f64
}

pub fn structure(n: usize, arcs: &[(usize, usize)]) -> Structure {
    Structure::from_arcs(n, arcs.iter().copied()).expect("valid diagram")
}

/// Every admissible structure compatible with `seq`, scored, sorted by
/// (energy, arc list) with a plain sort.
pub fn full_scan(
    seq: &Sequence,
    k: usize,
    sigma: usize,
    lambda: usize,
    model: &EnergyModel,
) -> Vec<(f64, Arcs)> {
    let n = seq.len();
    let allow = |i: usize, j: usize| BasePair::new(seq.base(i), seq.base(j)).is_some();
    let mut out = Vec::new();
    for_each_diagram(n, lambda, &allow, &mut |arcs: &[(usize, usize)]| {
        if admissible(arcs, n, k, sigma, lambda) {
            let mut sorted = arcs.to_vec();
            sorted.sort_unstable();
            out.push((energy_brute(seq, &sorted, model), sorted));
        }
    });
    // iterate in reverse discovery order before sorting
    out.reverse();
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    out
}
