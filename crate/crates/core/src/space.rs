/// Basis of the module P(n) of polynomials of degree at most n.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PolyBasis {
    pub degree: usize,
}

impl PolyBasis {
    pub fn dim(&self) -> usize {
        self.degree + 1
    }
}

/// The graded space P(m) (+) P(n) with basis ordered upper vectors first:
/// e_0 .. e_m, f_0 .. f_n. For the representations here m = n - 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GradedSpace {
    pub upper: PolyBasis,
    pub lower: PolyBasis,
}

impl GradedSpace {
    pub fn new(upper_degree: usize, lower_degree: usize) -> GradedSpace {
        GradedSpace {
            upper: PolyBasis {
                degree: upper_degree,
            },
            lower: PolyBasis {
                degree: lower_degree,
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.upper.dim() + self.lower.dim()
    }

    pub fn upper_index(&self, k: usize) -> usize {
        assert!(k <= self.upper.degree);
        k
    }

    pub fn lower_index(&self, k: usize) -> usize {
        assert!(k <= self.lower.degree);
        self.upper.dim() + k
    }

    pub fn is_upper(&self, i: usize) -> bool {
        i < self.upper.dim()
    }

    pub fn label(&self, i: usize) -> String {
        if self.is_upper(i) {
            format!("e_{i}")
        } else {
            format!("f_{}", i - self.upper.dim())
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.label(i)).collect()
    }
}
