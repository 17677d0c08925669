//! Relabelings of the generators that preserve the Weyl relations.

/// One generator of the relabeling group, acting on exponent vectors laid
/// out as `(m_1, n_1, m_2, n_2, ...)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relabel {
    /// Exchange two dofs with equal `θ`.
    Swap(usize, usize),
    /// `U_j → V_j`, `V_j → U_j^{-1}`.
    Fourier(usize),
    /// `U_j → U_j^{-1}`; needs integer `θ_j`.
    FlipU(usize),
}

impl Relabel {
    pub fn apply(self, exps: &[i8]) -> Vec<i8> {
        let mut out = exps.to_vec();
        match self {
            Relabel::Swap(a, b) => {
                out.swap(2 * a, 2 * b);
                out.swap(2 * a + 1, 2 * b + 1);
            }
            Relabel::Fourier(j) => {
                out[2 * j] = -exps[2 * j + 1];
                out[2 * j + 1] = exps[2 * j];
            }
            Relabel::FlipU(j) => out[2 * j] = -exps[2 * j],
        }
        out
    }
}

/// Generators of the group: dof swaps among equal ratios, and per dof the
/// Fourier map (unless only `U` generators are in play) and the `U` flip
/// (integer ratios only).
pub fn generators(theta_num: &[i64], denom: i64, u_only: bool) -> Vec<Relabel> {
    let n = theta_num.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if theta_num[a] == theta_num[b] {
                out.push(Relabel::Swap(a, b));
            }
        }
    }
    for (j, t) in theta_num.iter().enumerate() {
        if !u_only {
            out.push(Relabel::Fourier(j));
        }
        if t % denom == 0 {
            out.push(Relabel::FlipU(j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_has_order_four() {
        let x = vec![1, -1, 0, 1];
        let mut y = x.clone();
        for _ in 0..4 {
            y = Relabel::Fourier(0).apply(&y);
        }
        assert_eq!(x, y);
        assert_eq!(Relabel::Fourier(0).apply(&x), vec![1, 1, 0, 1]);
    }

    #[test]
    fn generator_set() {
        assert_eq!(generators(&[1, 1], 1, false).len(), 5);
        assert_eq!(generators(&[1, 3], 1, true).len(), 2);
        assert_eq!(generators(&[1], 3, false), vec![Relabel::Fourier(0)]);
    }
}
