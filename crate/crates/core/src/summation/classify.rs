use crate::arith::gcd;
use crate::error::{invalid, Result};

/// Maps primes to class labels `0..label_count`, or `None` for excluded
/// (ramified) primes.
pub trait PrimeClassifier {
    fn label_count(&self) -> usize;
    fn classify(&self, p: u64) -> Option<usize>;
    fn label_name(&self, label: usize) -> String;
    /// Chebotarev density of the label as a reduced fraction.
    fn expected_density(&self, label: usize) -> (u64, u64);
}

impl<C: PrimeClassifier + ?Sized> PrimeClassifier for &C {
    fn label_count(&self) -> usize {
        (**self).label_count()
    }
    fn classify(&self, p: u64) -> Option<usize> {
        (**self).classify(p)
    }
    fn label_name(&self, label: usize) -> String {
        (**self).label_name(label)
    }
    fn expected_density(&self, label: usize) -> (u64, u64) {
        (**self).expected_density(label)
    }
}

/// One label containing every prime.
#[derive(Debug, Clone, Copy, Default)]
pub struct AllPrimes;

impl PrimeClassifier for AllPrimes {
    fn label_count(&self) -> usize {
        1
    }
    fn classify(&self, _p: u64) -> Option<usize> {
        Some(0)
    }
    fn label_name(&self, _label: usize) -> String {
        "primes".into()
    }
    fn expected_density(&self, _label: usize) -> (u64, u64) {
        (1, 1)
    }
}

const EXCLUDED: u32 = u32::MAX;

/// Classifies primes by residue modulo `q`; primes dividing `q` are excluded.
#[derive(Debug, Clone)]
pub struct ResidueClassifier {
    q: u64,
    table: Vec<u32>,
    groups: Vec<Vec<u64>>,
    unit_count: u64,
}

impl ResidueClassifier {
    /// One label per unit residue, in ascending order.
    pub fn units(q: u64) -> Result<Self> {
        if q < 2 {
            return invalid(format!("modulus {q} below 2"));
        }
        let groups = (1..q).filter(|&a| gcd(a, q) == 1).map(|a| vec![a]).collect::<Vec<_>>();
        Self::grouped(q, groups)
    }

    /// Labels are the given groups of residues, which must partition the
    /// units modulo `q`.
    pub fn grouped(q: u64, groups: Vec<Vec<u64>>) -> Result<Self> {
        if q < 2 || q > u32::MAX as u64 {
            return invalid(format!("modulus {q} out of range"));
        }
        let mut table = vec![EXCLUDED; q as usize];
        for (label, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return invalid(format!("empty residue group at position {label}"));
            }
            for &a in group {
                let r = a % q;
                if gcd(r, q) != 1 {
                    return invalid(format!("{a} is not a unit modulo {q}"));
                }
                if table[r as usize] != EXCLUDED {
                    return invalid(format!("residue {a} appears in two groups"));
                }
                table[r as usize] = label as u32;
            }
        }
        let unit_count = (1..q).filter(|&a| gcd(a, q) == 1).count() as u64;
        let covered = table.iter().filter(|&&t| t != EXCLUDED).count() as u64;
        if covered != unit_count {
            return invalid(format!(
                "residue groups cover {covered} of the {unit_count} units modulo {q}"
            ));
        }
        let groups = groups
            .into_iter()
            .map(|g| g.into_iter().map(|a| a % q).collect())
            .collect();
        Ok(ResidueClassifier {
            q,
            table,
            groups,
            unit_count,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn groups(&self) -> &[Vec<u64>] {
        &self.groups
    }

    /// Label holding residue `a`, if `a` is a unit.
    pub fn label_of(&self, a: u64) -> Option<usize> {
        match self.table[(a % self.q) as usize] {
            EXCLUDED => None,
            l => Some(l as usize),
        }
    }
}

impl PrimeClassifier for ResidueClassifier {
    fn label_count(&self) -> usize {
        self.groups.len()
    }

    #[inline]
    fn classify(&self, p: u64) -> Option<usize> {
        self.label_of(p)
    }

    fn label_name(&self, label: usize) -> String {
        let parts: Vec<String> = self.groups[label].iter().map(|a| a.to_string()).collect();
        format!("a={}", parts.join("|"))
    }

    fn expected_density(&self, label: usize) -> (u64, u64) {
        let n = self.groups[label].len() as u64;
        let g = gcd(n, self.unit_count);
        (n / g, self.unit_count / g)
    }
}
