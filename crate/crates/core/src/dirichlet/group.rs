use crate::arith::{crt_pair, factorize, gcd, primitive_root_prime_power};
use crate::error::{invalid, Result};

/// Largest modulus for which the discrete-log table is built.
pub const MAX_MODULUS: u64 = 1 << 24;

const NOT_UNIT: u32 = u32::MAX;

/// `(Z/qZ)^×` as a product of cyclic groups with a full discrete-log table.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitGroupStructure {
    pub q: u64,
    /// `(residue mod q, order)` per cyclic factor.
    pub generators: Vec<(u64, u64)>,
    pub phi: u64,
    /// Residue → mixed-radix index of its exponent vector (first generator
    /// fastest), or `NOT_UNIT`.
    dlog: Vec<u32>,
}

impl UnitGroupStructure {
    pub fn orders(&self) -> Vec<u64> {
        self.generators.iter().map(|&(_, o)| o).collect()
    }

    /// Exponent of the group: lcm of the generator orders.
    pub fn exponent(&self) -> u64 {
        self.generators.iter().fold(1, |acc, &(_, o)| crate::arith::lcm(acc, o))
    }

    pub fn is_unit(&self, a: u64) -> bool {
        self.dlog[(a % self.q) as usize] != NOT_UNIT
    }

    /// Mixed-radix index of `a`'s exponent vector.
    #[inline]
    pub fn index(&self, a: u64) -> Option<usize> {
        match self.dlog[(a % self.q) as usize] {
            NOT_UNIT => None,
            i => Some(i as usize),
        }
    }

    pub fn dlog(&self, a: u64) -> Option<Vec<u64>> {
        self.index(a).map(|i| self.decode(i))
    }

    pub fn decode(&self, mut index: usize) -> Vec<u64> {
        self.generators
            .iter()
            .map(|&(_, o)| {
                let e = index as u64 % o;
                index /= o as usize;
                e
            })
            .collect()
    }

    /// Whether `a` lies in the subgroup of squares.
    pub fn is_square(&self, a: u64) -> Option<bool> {
        self.dlog(a).map(|e| {
            e.iter()
                .zip(&self.generators)
                .all(|(&e, &(_, o))| o % 2 == 1 || e % 2 == 0)
        })
    }

    /// `dim_{F_2}(G/G²)`: number of even-order cyclic factors.
    pub fn two_rank(&self) -> u32 {
        self.generators.iter().filter(|&&(_, o)| o % 2 == 0).count() as u32
    }

    /// Units in ascending order.
    pub fn units(&self) -> Vec<u64> {
        (1..self.q).filter(|&a| self.is_unit(a)).collect()
    }
}

/// Local generators of `(Z/p^kZ)^×` with their orders.
fn local_generators(p: u64, k: u32) -> Vec<(u64, u64)> {
    let m = p.pow(k);
    match (p, k) {
        (2, 1) => vec![],
        (2, 2) => vec![(3, 2)],
        (2, _) => vec![(m - 1, 2), (5, m / 4)],
        _ => vec![(primitive_root_prime_power(p, k), m / p * (p - 1))],
    }
}

pub fn unit_group(q: u64) -> Result<UnitGroupStructure> {
    if q < 3 {
        return invalid(format!("unit group needs q >= 3, got {q}"));
    }
    if q > MAX_MODULUS {
        return invalid(format!("modulus {q} exceeds the table budget {MAX_MODULUS}"));
    }
    let mut generators = Vec::new();
    for (p, k) in factorize(q) {
        let m = p.pow(k);
        let rest = q / m;
        for (g, o) in local_generators(p, k) {
            // lift to a residue that is 1 modulo the other prime powers
            let lifted = if rest == 1 { g } else { crt_pair(g, m, 1, rest) % q };
            generators.push((lifted, o));
        }
    }
    let phi: u64 = generators.iter().map(|&(_, o)| o).product();
    let mut dlog = vec![NOT_UNIT; q as usize];
    let mut exps = vec![0u64; generators.len()];
    let mut current = 1 % q;
    for index in 0..phi {
        dlog[current as usize] = index as u32;
        for (i, &(g, o)) in generators.iter().enumerate() {
            exps[i] += 1;
            current = crate::arith::mul_mod(current, g, q);
            if exps[i] < o {
                break;
            }
            exps[i] = 0;
        }
    }
    debug_assert_eq!(dlog.iter().filter(|&&d| d != NOT_UNIT).count() as u64, phi);
    debug_assert!((1..q).all(|a| (gcd(a, q) == 1) == (dlog[a as usize] != NOT_UNIT)));
    Ok(UnitGroupStructure {
        q,
        generators,
        phi,
        dlog,
    })
}

/// `t` from the case formula on the number of distinct prime divisors,
/// cross-checked against the 2-rank of the unit group.
pub fn t_of_q(q: u64) -> Result<u32> {
    let group = unit_group(q)?;
    let primes = factorize(q).len() as u32;
    let t = if q.is_multiple_of(8) {
        primes + 1
    } else if q % 4 == 2 {
        primes - 1
    } else {
        primes
    };
    let direct = group.two_rank();
    if t != direct {
        return Err(crate::error::Error::Internal(format!(
            "case formula gives t={t} but (Z/{q}Z)^x has 2-rank {direct}"
        )));
    }
    Ok(t)
}

pub fn is_quadratic_residue(a: u64, q: u64) -> Result<bool> {
    unit_group(q)?
        .is_square(a)
        .map_or_else(|| invalid(format!("{a} is not a unit modulo {q}")), Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{euler_phi, mul_mod};

    #[test]
    fn small_structures() {
        assert_eq!(unit_group(4).unwrap().generators, vec![(3, 2)]);
        assert_eq!(unit_group(8).unwrap().orders(), vec![2, 2]);
        assert_eq!(unit_group(60).unwrap().phi, 16);
        assert!(unit_group(2).is_err());
    }

    #[test]
    fn dlog_inverts_generators() {
        for q in [5u64, 8, 9, 12, 16, 60, 63, 100, 243, 1000] {
            let g = unit_group(q).unwrap();
            assert_eq!(g.phi, euler_phi(q));
            for (i, &(r, _)) in g.generators.iter().enumerate() {
                let mut unit = vec![0; g.generators.len()];
                unit[i] = 1;
                assert_eq!(g.dlog(r).unwrap(), unit, "q={q}");
            }
            // dlog is a homomorphism into the exponent box
            for a in g.units() {
                for b in g.units().into_iter().step_by(7) {
                    let ea = g.dlog(a).unwrap();
                    let eb = g.dlog(b).unwrap();
                    let ec = g.dlog(mul_mod(a, b, q)).unwrap();
                    for j in 0..ea.len() {
                        assert_eq!((ea[j] + eb[j]) % g.generators[j].1, ec[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn residues_mod_60() {
        assert!(is_quadratic_residue(1, 60).unwrap());
        assert!(is_quadratic_residue(49, 60).unwrap());
        assert!(!is_quadratic_residue(7, 60).unwrap());
        assert!(!is_quadratic_residue(3, 4).unwrap());
        assert!(is_quadratic_residue(6, 60).is_err());
    }

    #[test]
    fn t_values() {
        assert_eq!(t_of_q(4).unwrap(), 1);
        assert_eq!(t_of_q(8).unwrap(), 2);
        assert_eq!(t_of_q(60).unwrap(), 3);
        assert_eq!(t_of_q(6).unwrap(), 1);
        assert_eq!(t_of_q(3).unwrap(), 1);
    }
}
