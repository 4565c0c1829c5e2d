use super::GroupError;
use std::fmt;

/// A bijection on `0..degree`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self.to_cycle_string())
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Permutation, GroupError> {
        if images.is_empty() {
            return Err(GroupError::InvalidPermutation("degree must be positive".into()));
        }
        let mut seen = vec![false; images.len()];
        for &p in &images {
            if p >= images.len() || std::mem::replace(&mut seen[p], true) {
                return Err(GroupError::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Permutation {
        Permutation {
            images: (0..degree.max(1)).collect(),
        }
    }

    /// A single cycle on 0-based points.
    pub fn cycle(degree: usize, points: &[usize]) -> Result<Permutation, GroupError> {
        let mut images: Vec<usize> = (0..degree).collect();
        for (i, &p) in points.iter().enumerate() {
            if p >= degree {
                return Err(GroupError::InvalidPermutation(format!(
                    "point {} exceeds degree {degree}",
                    p + 1
                )));
            }
            images[p] = points[(i + 1) % points.len()];
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&p| self.images[p]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p] = i;
        }
        Permutation { images }
    }

    /// Parses a list of generators such as `(1 2 3 4);(1 3)`. Points are
    /// 1-based. Each generator may be a product of cycles, e.g. `(1 2)(3 4)`;
    /// cycles inside one generator are composed right to left. All generators
    /// share the degree given by the largest point mentioned anywhere.
    pub fn parse_generators(text: &str) -> Result<Vec<Permutation>, GroupError> {
        let mut parsed: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut degree = 1;
        for piece in text.split(';') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let cycles = parse_cycles(piece)?;
            for c in &cycles {
                degree = degree.max(c.iter().copied().max().unwrap_or(0) + 1);
            }
            parsed.push(cycles);
        }
        parsed
            .into_iter()
            .map(|cycles| {
                cycles.iter().try_fold(Permutation::identity(degree), |acc, c| {
                    Ok(acc.compose(&Permutation::cycle(degree, c)?))
                })
            })
            .collect()
    }

    /// Disjoint cycle notation with 1-based points; the identity is `()`.
    pub fn to_cycle_string(&self) -> String {
        let mut seen = vec![false; self.images.len()];
        let mut out = String::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.images[p];
            }
            let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
            out.push('(');
            out.push_str(&body.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

fn parse_cycles(piece: &str) -> Result<Vec<Vec<usize>>, GroupError> {
    let bad = |msg: String| GroupError::InvalidPermutation(msg);
    let mut cycles = Vec::new();
    let mut rest = piece.trim();
    while !rest.is_empty() {
        let body_start = rest
            .strip_prefix('(')
            .ok_or_else(|| bad(format!("expected `(` in `{piece}`")))?;
        let close = body_start
            .find(')')
            .ok_or_else(|| bad(format!("unclosed cycle in `{piece}`")))?;
        let mut cycle = Vec::new();
        for tok in body_start[..close].split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let p: usize = tok
                .parse()
                .map_err(|_| bad(format!("bad point `{tok}` in `{piece}`")))?;
            if p == 0 {
                return Err(bad("points are 1-based".into()));
            }
            if cycle.contains(&(p - 1)) {
                return Err(bad(format!("point {p} repeated in one cycle")));
            }
            cycle.push(p - 1);
        }
        cycles.push(cycle);
        rest = body_start[close + 1..].trim_start();
    }
    Ok(cycles)
}
