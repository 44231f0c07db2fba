//! The kernel monoid of the Picard map of a rational tree fiber.
//!
//! For a tree `P` of genus-0 components with attachment node `x_0` and a marking `s`,
//! generators are `t_{0±}` (the two sides of `x_0`), `t_{j±}` per internal node and `w`
//! (the marking). Their images in `Pic(P) = ⊕ Z·f_i` are
//! `t_{j+} ↦ f_{i+} − f_{i−}`, `t_{j−} ↦ f_{i−} − f_{i+}`, `t_{0+} ↦ −f_{root}`,
//! `t_{0−} ↦ f_{root}` and `w ↦ −f_{i(s)}`, where `i+` is the endpoint on the root side.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ComponentKind, ContractionError, ContractionPlan};
use crate::lattice::{integer_kernel, IntMatrix};

/// A tree on vertices `0..vertices`, with the attachment node at `root` and the marking at `marking`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardTree {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
    pub marking: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PicardGenerator {
    T0Plus,
    T0Minus,
    TPlus(usize),
    TMinus(usize),
    W,
}

impl fmt::Display for PicardGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PicardGenerator::T0Plus => write!(f, "t0+"),
            PicardGenerator::T0Minus => write!(f, "t0-"),
            PicardGenerator::TPlus(j) => write!(f, "t{}+", j + 1),
            PicardGenerator::TMinus(j) => write!(f, "t{}-", j + 1),
            PicardGenerator::W => write!(f, "w"),
        }
    }
}

/// The Picard matrix, its kernel lattice and the claimed free generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardKernel {
    pub generators: Vec<PicardGenerator>,
    /// Rows indexed by vertices, columns by `generators`.
    pub matrix: IntMatrix,
    /// HNF basis of the integer kernel.
    pub kernel: IntMatrix,
    /// `t_{0+} + t_{0−}` followed by `t_{j+} + t_{j−}` in edge order.
    pub diagonals: Vec<Vec<BigInt>>,
    pub w_prime: Vec<BigInt>,
    /// Internal edges on the path from the root to the marking, in order.
    pub path: Vec<usize>,
}

fn position(gens: &[PicardGenerator], g: PicardGenerator) -> usize {
    gens.iter().position(|&x| x == g).expect("generator present")
}

/// Builds and solves the Picard kernel of a tree fiber.
pub fn picard_kernel(tree: &PicardTree) -> Result<PicardKernel, ContractionError> {
    let n = tree.vertices;
    if n == 0 || tree.root >= n || tree.marking >= n {
        return Err(ContractionError::MalformedTree("root or marking out of range".into()));
    }
    if tree.edges.len() + 1 != n {
        return Err(ContractionError::MalformedTree(format!(
            "{} edges on {} vertices",
            tree.edges.len(),
            n
        )));
    }
    // Parent pointers from the root; `parent[v] = (u, edge)`.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[tree.root] = true;
    let mut queue = VecDeque::from([tree.root]);
    while let Some(u) = queue.pop_front() {
        for (j, &(a, b)) in tree.edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(ContractionError::MalformedTree(format!("edge {j} out of range")));
            }
            let w = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((u, j));
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(ContractionError::MalformedTree("not connected".into()));
    }
    let mut plus = vec![0; tree.edges.len()];
    let mut minus = vec![0; tree.edges.len()];
    for v in 0..n {
        if let Some((u, j)) = parent[v] {
            plus[j] = u;
            minus[j] = v;
        }
    }

    let mut generators = vec![PicardGenerator::T0Plus, PicardGenerator::T0Minus];
    for j in 0..tree.edges.len() {
        generators.push(PicardGenerator::TPlus(j));
        generators.push(PicardGenerator::TMinus(j));
    }
    generators.push(PicardGenerator::W);
    let m = generators.len();
    let mut matrix = IntMatrix::zeros(n, m);
    let add = |mat: &mut IntMatrix, i: usize, c: usize, x: i64| {
        let v = mat.get(i, c) + BigInt::from(x);
        mat.set(i, c, v);
    };
    for (c, g) in generators.iter().enumerate() {
        match *g {
            PicardGenerator::T0Plus => add(&mut matrix, tree.root, c, -1),
            PicardGenerator::T0Minus => add(&mut matrix, tree.root, c, 1),
            PicardGenerator::TPlus(j) => {
                add(&mut matrix, plus[j], c, 1);
                add(&mut matrix, minus[j], c, -1);
            }
            PicardGenerator::TMinus(j) => {
                add(&mut matrix, plus[j], c, -1);
                add(&mut matrix, minus[j], c, 1);
            }
            PicardGenerator::W => add(&mut matrix, tree.marking, c, -1),
        }
    }
    let kernel = integer_kernel(&matrix);

    let unit = |gs: &[PicardGenerator]| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); m];
        for &g in gs {
            v[position(&generators, g)] += BigInt::one();
        }
        v
    };
    let mut diagonals = vec![unit(&[PicardGenerator::T0Plus, PicardGenerator::T0Minus])];
    for j in 0..tree.edges.len() {
        diagonals.push(unit(&[PicardGenerator::TPlus(j), PicardGenerator::TMinus(j)]));
    }
    let mut path = Vec::new();
    let mut cur = tree.marking;
    while let Some((u, j)) = parent[cur] {
        path.push(j);
        cur = u;
    }
    path.reverse();
    let mut wp = vec![PicardGenerator::T0Minus, PicardGenerator::W];
    wp.extend(path.iter().map(|&j| PicardGenerator::TMinus(j)));
    let w_prime = unit(&wp);
    Ok(PicardKernel {
        generators,
        matrix,
        kernel,
        diagonals,
        w_prime,
        path,
    })
}

impl PicardKernel {
    fn coefficient(&self, v: &[BigInt], g: PicardGenerator) -> BigInt {
        v[position(&self.generators, g)].clone()
    }

    /// Decomposes a kernel element as `a·w' + Σ b_j·diag_j` using the private
    /// coordinates `w` and `t_{j+}`; `None` if the decomposition does not reproduce it.
    pub fn decompose(&self, u: &[BigInt]) -> Option<(BigInt, Vec<BigInt>)> {
        let a = self.coefficient(u, PicardGenerator::W);
        let mut bs = vec![self.coefficient(u, PicardGenerator::T0Plus)];
        bs.extend((0..self.diagonals.len() - 1).map(|j| self.coefficient(u, PicardGenerator::TPlus(j))));
        let mut rebuilt: Vec<BigInt> = self.w_prime.iter().map(|x| x * &a).collect();
        for (b, d) in bs.iter().zip(&self.diagonals) {
            for (r, x) in rebuilt.iter_mut().zip(d) {
                *r += x * b;
            }
        }
        (rebuilt == u).then_some((a, bs))
    }

    /// Checks that the diagonals and `w'` lie in the kernel, freely generate it as a
    /// lattice, and that nonnegative kernel elements have nonnegative coordinates.
    pub fn verify(&self) -> Result<(), String> {
        let zero = vec![BigInt::zero(); self.matrix.rows()];
        for (k, d) in self.diagonals.iter().chain(std::iter::once(&self.w_prime)).enumerate() {
            if self.matrix.mul_vec(d) != zero {
                return Err(format!("claimed generator {k} is not in the kernel"));
            }
        }
        if self.kernel.rows() != self.diagonals.len() + 1 {
            return Err(format!(
                "kernel rank {} differs from generator count {}",
                self.kernel.rows(),
                self.diagonals.len() + 1
            ));
        }
        for row in self.kernel.to_rows() {
            if self.decompose(&row).is_none() {
                return Err(format!("kernel vector {row:?} is not spanned"));
            }
        }
        // Private coordinates: w for w', t_{j+} (t_{0+}) for diag_j.
        let mut private = vec![PicardGenerator::W, PicardGenerator::T0Plus];
        private.extend((0..self.diagonals.len() - 1).map(PicardGenerator::TPlus));
        let mut gens = vec![&self.w_prime];
        gens.extend(self.diagonals.iter());
        for (a, g) in gens.iter().enumerate() {
            for (b, &p) in private.iter().enumerate() {
                let expect = if a == b { BigInt::one() } else { BigInt::zero() };
                if self.coefficient(g, p) != expect {
                    return Err(format!("coordinate {p} does not isolate generator {a}"));
                }
            }
        }
        if self.coefficient(&self.w_prime, PicardGenerator::T0Plus) != BigInt::zero()
            || self.coefficient(&self.w_prime, PicardGenerator::T0Minus) != BigInt::one()
        {
            return Err("w' has wrong coefficients at t0±".into());
        }
        Ok(())
    }
}

/// Picard kernel of the tail component of `plan` carrying `marking`.
pub fn picard_kernel_for_marking(plan: &ContractionPlan, marking: usize) -> Result<PicardKernel, ContractionError> {
    let g = plan.source();
    let pid = g
        .point_of_marking(marking)
        .ok_or_else(|| ContractionError::Mismatch(format!("marking {marking} not present")))?;
    let v = &g.points()[pid].vertex;
    let c = plan
        .component_of(v)
        .filter(|c| c.kind == ComponentKind::Tail)
        .ok_or_else(|| ContractionError::Mismatch(format!("marking {marking} is not on a collapsed tail")))?;
    let ids: Vec<&String> = c.vertices.iter().collect();
    let index = |x: &str| ids.iter().position(|y| *y == x).expect("vertex in component");
    let edges = c
        .internal_edges
        .iter()
        .map(|e| {
            let ends = &g.edges()[e].ends;
            (index(&ends[0]), index(&ends[1]))
        })
        .collect();
    picard_kernel(&PicardTree {
        vertices: ids.len(),
        edges,
        root: index(&c.attachments[0].inner),
        marking: index(v),
    })
}
