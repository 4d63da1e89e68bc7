//! Subdivisions of type `(m)`: the tiling of the n-cube into
//! `m₁·…·mₙ` sub-boxes, and the incidence check for composing a labeled
//! array of parts.

use crate::error::CubeError;

/// One part of a subdivision: its multi-index `(r)` (1-based) and its
/// domain `{x : rᵢ−1 ≤ xᵢ ≤ rᵢ}` in the stretched cube
/// `[0,m₁]×…×[0,mₙ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub index: Vec<usize>,
    pub domain: Vec<(usize, usize)>,
}

impl Part {
    pub fn name(&self) -> String {
        let ix: Vec<String> = self.index.iter().map(|r| r.to_string()).collect();
        format!("({})", ix.join(","))
    }
}

/// A subdivision of type `(m)`; parts are listed in lexicographic order of
/// their multi-index.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub m: Vec<usize>,
    pub parts: Vec<Part>,
}

/// Builds the subdivision of type `(m)`; every `mᵢ ≥ 1`.
pub fn subdivide(m: &[usize]) -> Result<Subdivision, CubeError> {
    if m.iter().any(|&x| x == 0) {
        return Err(CubeError::WrongDimension { expected: 1, got: 0 });
    }
    let mut parts = vec![Part { index: Vec::new(), domain: Vec::new() }];
    for &mi in m {
        let mut next = Vec::with_capacity(parts.len() * mi);
        for p in &parts {
            for r in 1..=mi {
                let mut index = p.index.clone();
                index.push(r);
                let mut domain = p.domain.clone();
                domain.push((r - 1, r));
                next.push(Part { index, domain });
            }
        }
        parts = next;
    }
    Ok(Subdivision { m: m.to_vec(), parts })
}

impl Subdivision {
    pub fn dimension(&self) -> usize {
        self.m.len()
    }

    pub fn part(&self, index: &[usize]) -> Option<&Part> {
        self.parts.iter().find(|p| p.index == index)
    }

    /// The parts tile the stretched cube: domains are unit boxes, one per
    /// multi-index, covering `[0,m₁]×…×[0,mₙ]`.
    pub fn is_tiling(&self) -> bool {
        let expect: usize = self.m.iter().product();
        self.parts.len() == expect
            && self.parts.iter().all(|p| {
                p.index.len() == self.m.len()
                    && p.index.iter().zip(&self.m).all(|(&r, &mi)| 1 <= r && r <= mi)
                    && p.domain
                        .iter()
                        .zip(&p.index)
                        .all(|(&(lo, hi), &r)| lo + 1 == hi && hi == r)
            })
    }
}

/// Face labels of a part, one `(minus, plus)` pair per direction. Two
/// parts adjacent in direction `k` must agree: the plus label of the lower
/// part equals the minus label of the upper part.
pub type FaceLabels = Vec<(String, String)>;

/// Verifies the multiple-incidence relations for an assignment of labeled
/// faces to parts. `labels[i]` belongs to `s.parts[i]`.
pub fn compose_check(s: &Subdivision, labels: &[FaceLabels]) -> Result<(), CubeError> {
    if labels.len() != s.parts.len() || labels.iter().any(|l| l.len() != s.m.len()) {
        return Err(CubeError::WrongDimension { expected: s.parts.len(), got: labels.len() });
    }
    for (i, p) in s.parts.iter().enumerate() {
        for k in 0..s.m.len() {
            if p.index[k] == s.m[k] {
                continue; // no neighbour above in direction k
            }
            let mut upper = p.index.clone();
            upper[k] += 1;
            let j = s
                .parts
                .iter()
                .position(|q| q.index == upper)
                .expect("tiling contains every index");
            let plus = &labels[i][k].1;
            let minus = &labels[j][k].0;
            if plus != minus {
                return Err(CubeError::IncidenceMismatch {
                    left: p.name(),
                    right: s.parts[j].name(),
                    direction: k + 1,
                    left_label: plus.clone(),
                    right_label: minus.clone(),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_split() {
        let s = subdivide(&[2]).unwrap();
        assert_eq!(s.parts.len(), 2);
        assert!(s.is_tiling());
        assert_eq!(s.parts[0].domain, vec![(0, 1)]);
        assert_eq!(s.parts[1].domain, vec![(1, 2)]);
    }

    #[test]
    fn trivial_subdivision() {
        let s = subdivide(&[1, 1]).unwrap();
        assert_eq!(s.parts.len(), 1);
        assert!(s.is_tiling());
        // no adjacency conditions at all
        let labels = vec![vec![("a".into(), "b".into()), ("c".into(), "d".into())]];
        compose_check(&s, &labels).unwrap();
    }

    #[test]
    fn tiling_counts() {
        for m in [vec![2usize, 2], vec![3, 1, 2], vec![4]] {
            let s = subdivide(&m).unwrap();
            assert!(s.is_tiling());
            assert_eq!(s.parts.len(), m.iter().product::<usize>());
        }
    }

    #[test]
    fn shared_face_must_match() {
        let s = subdivide(&[2]).unwrap();
        let good = vec![
            vec![("L".into(), "mid".into())],
            vec![("mid".into(), "R".into())],
        ];
        compose_check(&s, &good).unwrap();
        let bad = vec![
            vec![("L".into(), "mid".into())],
            vec![("other".into(), "R".into())],
        ];
        let err = compose_check(&s, &bad).unwrap_err();
        match err {
            CubeError::IncidenceMismatch { left, right, direction, .. } => {
                assert_eq!(left, "(1)");
                assert_eq!(right, "(2)");
                assert_eq!(direction, 1);
            }
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn two_by_two_mismatch_is_named() {
        let s = subdivide(&[2, 2]).unwrap();
        // consistent everywhere except between (1,2) and (2,2) in dir 1
        let mk = |a: &str, b: &str, c: &str, d: &str| -> FaceLabels {
            vec![(a.into(), b.into()), (c.into(), d.into())]
        };
        let labels = vec![
            mk("x0", "m1", "y0", "m2"), // (1,1)
            mk("x0", "m3", "m2", "y1"), // (1,2)
            mk("m1", "x1", "y0", "m4"), // (2,1)
            mk("WRONG", "x1", "m4", "y1"), // (2,2): dir-1 minus should be m3
        ];
        let err = compose_check(&s, &labels).unwrap_err();
        match err {
            CubeError::IncidenceMismatch { left, right, .. } => {
                assert_eq!(left, "(1,2)");
                assert_eq!(right, "(2,2)");
            }
            other => panic!("wrong error {other:?}"),
        }
    }
}
