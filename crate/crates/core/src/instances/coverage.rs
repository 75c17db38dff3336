use crate::maxcov::CoverageInstance;

/// King neighborhoods on a `3k × 3k` board with budget `k²`.
///
/// Square `(r, c)` has index `3k·r + c`; set `j` holds the squares a king on
/// square `j` reaches in at most one step, itself included. All costs and
/// weights are 1.
pub fn gen_chessboard(k: usize) -> CoverageInstance {
    assert!(k >= 1, "board parameter must be positive");
    let side = 3 * k as i64;
    let mut sets = Vec::with_capacity((side * side) as usize);
    for r in 0..side {
        for c in 0..side {
            let mut s = Vec::with_capacity(9);
            for dr in -1..=1 {
                for dc in -1..=1 {
                    let (rr, cc) = (r + dr, c + dc);
                    if (0..side).contains(&rr) && (0..side).contains(&cc) {
                        s.push((rr * side + cc) as usize);
                    }
                }
            }
            sets.push(s);
        }
    }
    let m = sets.len();
    CoverageInstance::unit_cost(sets, vec![1.0; m], (k * k) as f64).expect("valid board")
}

/// Points of the projective plane of order `q` over the prime field, as
/// normalized homogeneous triples in a fixed order: `(1, a, b)` for all
/// `a, b`, then `(0, 1, a)`, then `(0, 0, 1)`.
fn projective_points(q: u64) -> Vec<[u64; 3]> {
    let mut pts = Vec::with_capacity((q * q + q + 1) as usize);
    for a in 0..q {
        for b in 0..q {
            pts.push([1, a, b]);
        }
    }
    for a in 0..q {
        pts.push([0, 1, a]);
    }
    pts.push([0, 0, 1]);
    pts
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// The projective plane of order `q` for a prime `q`, with budget `q`.
///
/// Elements are the `q² + q + 1` points and set `j` is the line whose
/// coordinates are the `j`-th normalized triple; a point lies on a line when
/// their dot product vanishes mod `q`. Every line has `q + 1` points, every
/// point lies on `q + 1` lines and two lines meet in exactly one point.
pub fn gen_fpp(q: u64) -> Result<CoverageInstance, crate::maxcov::CoverError> {
    if !is_prime(q) {
        return Err(crate::maxcov::CoverError::Invalid(format!("plane order {q} is not prime")));
    }
    let pts = projective_points(q);
    let sets = pts
        .iter()
        .map(|l| {
            (0..pts.len())
                .filter(|&i| (0..3).map(|t| l[t] * pts[i][t]).sum::<u64>() % q == 0)
                .collect()
        })
        .collect();
    CoverageInstance::unit_cost(sets, vec![1.0; pts.len()], q as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chessboard_shapes() {
        let one = gen_chessboard(1);
        assert_eq!((one.num_sets(), one.num_elements()), (9, 9));
        assert_eq!(one.set(4).len(), 9);
        let four = gen_chessboard(4);
        assert_eq!(four.num_elements(), 144);
        assert_eq!(four.budget(), 16.0);
        assert!(four.sets().iter().all(|s| [4, 6, 9].contains(&s.len())));
        // The centers of the 3×3 blocks tile the board.
        let centers: Vec<usize> = (0..4).flat_map(|br| (0..4).map(move |bc| (3 * br + 1) * 12 + 3 * bc + 1)).collect();
        assert_eq!(four.value(&centers), 144.0);
    }

    #[test]
    fn fano_plane() {
        let f = gen_fpp(2).unwrap();
        assert_eq!((f.num_sets(), f.num_elements()), (7, 7));
        assert!(f.sets().iter().all(|s| s.len() == 3));
        assert!(gen_fpp(4).is_err());
    }

    #[test]
    fn plane_of_order_17() {
        let f = gen_fpp(17).unwrap();
        assert_eq!(f.num_sets(), 307);
        assert!((0..307).all(|e| f.covering(e).len() == 18));
        assert!(f.sets().iter().all(|s| s.len() == 18));
        for a in 0..20 {
            for b in a + 1..20 {
                let common = f.set(a).iter().filter(|e| f.set(b).contains(e)).count();
                assert_eq!(common, 1);
            }
        }
    }
}
