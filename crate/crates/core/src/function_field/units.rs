use std::sync::Arc;

use super::poly::PolyFq;
use crate::error::{invalid, Error, Result};

/// Largest `q^{deg M}` for which residues are tabulated.
pub const RESIDUE_BUDGET: u64 = 1_000_000;
/// Largest unit group handled.
pub const UNIT_BUDGET: u64 = 100_000;

const NOT_UNIT: u32 = u32::MAX;

/// The unit group of `F_q[T]/M` with a discrete-log style table.
///
/// Residues are encoded by the base-`q` index of their coefficients. The
/// group is built by adjoining generators `g_1, g_2, ...`; `k_i` is the order
/// of `g_i` modulo the subgroup generated by the earlier ones and
/// `g_i^{k_i} = h_i` lies in that subgroup. Every unit is uniquely
/// `Π g_i^{e_i}` with `0 ≤ e_i < k_i`.
#[derive(Debug, Clone)]
pub struct UnitClassTable {
    pub modulus: PolyFq,
    pub q: u64,
    pub deg: usize,
    /// Unit residue codes, ascending.
    pub units: Vec<u32>,
    pub phi: u64,
    /// `square[code]` for unit codes.
    square: Vec<bool>,
    /// Mixed-radix exponent index per residue code.
    code_index: Vec<u32>,
    generators: Vec<u32>,
    steps: Vec<u64>,
    /// Exponent vector of `h_i` in the earlier generators.
    relations: Vec<Vec<u64>>,
}

impl UnitClassTable {
    pub fn new(modulus: &PolyFq) -> Result<Self> {
        let q = modulus.field();
        let deg = match modulus.degree() {
            Some(d) if d >= 1 => d,
            _ => return invalid("modulus must have degree at least 1"),
        };
        let modulus = modulus.monic();
        let size = (q as f64).powi(deg as i32);
        if size > RESIDUE_BUDGET as f64 {
            return Err(Error::Budget(format!("{q}^{deg} residues exceed {RESIDUE_BUDGET}")));
        }
        let size = q.pow(deg as u32) as usize;
        let residues: Vec<PolyFq> = (0..size as u64).map(|i| PolyFq::from_index(q, i, deg)).collect();
        let mut units = Vec::new();
        for (i, r) in residues.iter().enumerate() {
            if !r.is_zero() && r.gcd(&modulus)?.degree() == Some(0) {
                units.push(i as u32);
            }
        }
        let phi = units.len() as u64;
        if phi > UNIT_BUDGET {
            return Err(Error::Budget(format!("{phi} units exceed {UNIT_BUDGET}")));
        }
        let mul = |a: u32, b: u32| -> Result<u32> {
            let p = residues[a as usize].mulmod(&residues[b as usize], &modulus)?;
            Ok(p.index_below(deg) as u32)
        };

        let mut code_index = vec![NOT_UNIT; size];
        // subgroup so far, as (code, exponent vector) in mixed-radix order
        let one = 1u32;
        let mut members: Vec<(u32, Vec<u64>)> = vec![(one, vec![])];
        code_index[one as usize] = 0;
        let mut generators = Vec::new();
        let mut steps = Vec::new();
        let mut relations = Vec::new();
        while (members.len() as u64) < phi {
            let g = *units.iter().find(|&&u| code_index[u as usize] == NOT_UNIT).unwrap();
            // smallest k with g^k in the subgroup; the cosets g^j·H for j < k are new
            let mut power = g;
            let mut cosets = vec![];
            let mut k = 1u64;
            while code_index[power as usize] == NOT_UNIT {
                cosets.push(power);
                power = mul(power, g)?;
                k += 1;
            }
            let relation = members[code_index[power as usize] as usize].1.clone();
            let base = members.clone();
            for v in &mut members {
                v.1.push(0);
            }
            for (j, &gj) in cosets.iter().enumerate() {
                for (h, e) in &base {
                    let code = mul(gj, *h)?;
                    let mut exps = e.clone();
                    exps.push(j as u64 + 1);
                    members.push((code, exps));
                }
            }
            // restore mixed-radix order: index = e_1 + k_1(e_2 + ...)
            for (idx, (code, _)) in members.iter().enumerate() {
                code_index[*code as usize] = idx as u32;
            }
            generators.push(g);
            steps.push(k);
            relations.push(relation);
        }
        for v in &mut members {
            v.1.resize(generators.len(), 0);
        }
        debug_assert!(members
            .iter()
            .enumerate()
            .all(|(i, (_, e))| mixed_index(e, &steps) == i as u64));

        let mut square = vec![false; size];
        for &u in &units {
            square[mul(u, u)? as usize] = true;
        }
        Ok(UnitClassTable {
            modulus,
            q,
            deg,
            units,
            phi,
            square,
            code_index,
            generators,
            steps,
            relations,
        })
    }

    pub fn residue(&self, code: u32) -> PolyFq {
        PolyFq::from_index(self.q, code as u64, self.deg)
    }

    /// Residue code of `f mod M`.
    pub fn code_of(&self, f: &PolyFq) -> Result<u32> {
        Ok(f.rem(&self.modulus)?.index_below(self.deg) as u32)
    }

    /// Number of residue codes, `q^{deg M}`.
    pub fn code_count(&self) -> usize {
        self.code_index.len()
    }

    pub fn is_unit_code(&self, code: u32) -> bool {
        self.code_index[code as usize] != NOT_UNIT
    }

    pub fn is_square_code(&self, code: u32) -> bool {
        self.square[code as usize]
    }

    pub fn square_set(&self) -> Vec<u32> {
        self.units
            .iter()
            .copied()
            .filter(|&u| self.square[u as usize])
            .collect()
    }

    /// `dim_{F_2}(G/G²)`.
    pub fn t(&self) -> Result<u32> {
        let squares = self.square_set().len() as u64;
        let ratio = self.phi / squares;
        if ratio * squares != self.phi || !ratio.is_power_of_two() {
            return Err(Error::Internal(format!(
                "index of squares {}/{} is not a power of two",
                self.phi, squares
            )));
        }
        Ok(ratio.trailing_zeros())
    }

    /// Exponents of a unit on the adjoined generators.
    pub fn exponents(&self, code: u32) -> Option<Vec<u64>> {
        let mut idx = self.code_index[code as usize];
        if idx == NOT_UNIT {
            return None;
        }
        Some(
            self.steps
                .iter()
                .map(|&k| {
                    let e = idx as u64 % k;
                    idx /= k as u32;
                    e
                })
                .collect(),
        )
    }

    pub fn generator_codes(&self) -> &[u32] {
        &self.generators
    }

    /// All `Φ(M)` characters, principal first.
    pub fn characters(self: &Arc<Self>) -> Vec<FfCharacter> {
        let n = self.phi;
        let mut out = Vec::with_capacity(n as usize);
        for choice in 0..n {
            let mut rest = choice;
            let mut values: Vec<u64> = Vec::with_capacity(self.steps.len());
            for (i, &k) in self.steps.iter().enumerate() {
                let j = rest % k;
                rest /= k;
                // χ(g_i)^{k_i} = χ(h_i) fixes χ(g_i) up to a k_i-th root of unity
                let b = exponent_value(&self.relations[i], &values, n);
                debug_assert_eq!(b % k, 0);
                values.push((b / k + j * (n / k)) % n);
            }
            out.push(FfCharacter::new(self.clone(), values));
        }
        out
    }
}

fn mixed_index(e: &[u64], steps: &[u64]) -> u64 {
    e.iter().zip(steps).rev().fold(0, |acc, (&e, &k)| acc * k + e)
}

fn exponent_value(exps: &[u64], values: &[u64], n: u64) -> u64 {
    exps.iter().zip(values).fold(0u64, |acc, (&e, &v)| (acc + e * v) % n)
}

/// Character of `(F_q[T]/M)^×` with values `ζ^k`, `ζ = exp(2πi/Φ(M))`.
#[derive(Debug, Clone)]
pub struct FfCharacter {
    table: Arc<UnitClassTable>,
    /// `χ(g_i)` as exponents of `ζ`.
    pub values: Vec<u64>,
    pub is_principal: bool,
    pub is_real: bool,
    pub nu: u32,
}

impl FfCharacter {
    fn new(table: Arc<UnitClassTable>, values: Vec<u64>) -> Self {
        let n = table.phi;
        let is_principal = values.iter().all(|&v| v == 0);
        let is_real = values.iter().all(|&v| (2 * v) % n == 0);
        FfCharacter {
            table,
            values,
            is_principal,
            is_real,
            nu: (is_real && !is_principal) as u32,
        }
    }

    pub fn table(&self) -> &Arc<UnitClassTable> {
        &self.table
    }

    pub fn root_order(&self) -> u64 {
        self.table.phi
    }

    /// `χ` of the residue with this code, as an exponent of `ζ`.
    pub fn value_exponent(&self, code: u32) -> Option<u64> {
        let e = self.table.exponents(code)?;
        Some(exponent_value(&e, &self.values, self.table.phi))
    }

    pub fn value(&self, code: u32) -> num_complex::Complex64 {
        match self.value_exponent(code) {
            None => num_complex::Complex64::new(0.0, 0.0),
            Some(k) => crate::dirichlet::root_of_unity(k, self.table.phi),
        }
    }

    pub fn label(&self) -> String {
        let v: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        format!("{}:{}", self.table.modulus.coefficient_string(), v.join(","))
    }
}

pub fn unit_class_table(modulus: &PolyFq) -> Result<Arc<UnitClassTable>> {
    Ok(Arc::new(UnitClassTable::new(modulus)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(q: u64, c: &[u64]) -> Arc<UnitClassTable> {
        unit_class_table(&PolyFq::new(q, c.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn t_squared_over_f2() {
        let t = table(2, &[0, 0, 1]);
        let units: Vec<String> = t.units.iter().map(|&u| t.residue(u).to_string()).collect();
        assert_eq!(units, ["1", "T+1"]);
        assert_eq!(t.phi, 2);
        assert_eq!(t.square_set(), vec![1]);
        assert_eq!(t.t().unwrap(), 1);
    }

    #[test]
    fn small_tables() {
        let t = table(3, &[0, 1]);
        assert_eq!(t.phi, 2);
        assert_eq!(t.t().unwrap(), 1);
        let t = table(2, &[0, 1]);
        assert_eq!(t.phi, 1);
        assert_eq!(t.t().unwrap(), 0);
    }

    #[test]
    fn characters_are_homomorphisms() {
        for (q, c) in [
            (3u64, vec![0u64, 0, 0, 1]),
            (2, vec![1, 1, 0, 0, 1, 1]),
            (5, vec![0, 1, 1]),
        ] {
            let t = table(q, &c);
            let chars = t.characters();
            assert_eq!(chars.len() as u64, t.phi);
            let m = &t.modulus;
            for chi in &chars {
                for &a in t.units.iter().step_by(3) {
                    for &b in t.units.iter().step_by(5) {
                        let ab = t.residue(a).mulmod(&t.residue(b), m).unwrap().index_below(t.deg) as u32;
                        let lhs = chi.value_exponent(ab).unwrap();
                        let rhs = (chi.value_exponent(a).unwrap() + chi.value_exponent(b).unwrap()) % t.phi;
                        assert_eq!(lhs, rhs);
                    }
                }
            }
            // distinct characters
            let mut seen = std::collections::HashSet::new();
            for chi in &chars {
                let v: Vec<u64> = t.units.iter().map(|&u| chi.value_exponent(u).unwrap()).collect();
                assert!(seen.insert(v));
            }
            let real = chars.iter().filter(|c| c.is_real).count() as u64;
            assert_eq!(real, 1 << t.t().unwrap());
        }
    }

    #[test]
    fn budgets() {
        assert!(matches!(
            UnitClassTable::new(&PolyFq::new(2, [vec![0; 20], vec![1]].concat()).unwrap()),
            Err(Error::Budget(_))
        ));
    }
}
