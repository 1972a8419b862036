//! Monomial ideals stored as their canonical minimal generating set.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::monomial::{BlockShape, Monomial, VariableIndex};

/// A monomial ideal given by `G(I)`: an antichain under divisibility,
/// deduplicated and sorted in canonical order. The zero ideal has no
/// generators; the unit ideal has the single generator `1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    shape: BlockShape,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn zero(shape: &BlockShape) -> Self {
        Self {
            shape: shape.clone(),
            generators: Vec::new(),
        }
    }

    pub fn unit(shape: &BlockShape) -> Self {
        Self {
            shape: shape.clone(),
            generators: vec![Monomial::one(shape)],
        }
    }

    /// The ideal generated by `raw`, reduced to its minimal generators.
    pub fn minimalize(shape: &BlockShape, raw: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let raw: Vec<Monomial> = raw.into_iter().collect();
        for m in &raw {
            shape.ensure_same(m.shape())?;
        }
        Ok(Self::minimalize_unchecked(shape, raw))
    }

    pub(crate) fn minimalize_unchecked(shape: &BlockShape, mut raw: Vec<Monomial>) -> Self {
        raw.par_sort_unstable_by(|a, b| a.modulus().cmp(&b.modulus()).then_with(|| a.cmp(b)));
        raw.dedup();
        // A divisor has strictly smaller degree unless it is equal, so each
        // candidate only needs checking against kept generators of lower degree.
        let mut kept: Vec<Monomial> = Vec::with_capacity(raw.len());
        let mut lower_end = 0;
        let mut current_degree = None;
        for m in raw {
            let d = m.modulus();
            if current_degree != Some(d) {
                current_degree = Some(d);
                lower_end = kept.len();
            }
            if !kept[..lower_end].iter().any(|g| g.divides_unchecked(&m)) {
                kept.push(m);
            }
        }
        kept.par_sort_unstable();
        Self {
            shape: shape.clone(),
            generators: kept,
        }
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    /// `G(I)` in canonical order.
    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_one()
    }

    /// Whether `m` lies in the ideal.
    pub fn contains(&self, m: &Monomial) -> Result<bool> {
        self.shape.ensure_same(m.shape())?;
        Ok(self.generators.iter().any(|g| g.divides_unchecked(m)))
    }

    pub fn add(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.shape.ensure_same(&other.shape)?;
        let raw = self
            .generators
            .iter()
            .chain(&other.generators)
            .cloned()
            .collect();
        Ok(Self::minimalize_unchecked(&self.shape, raw))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.shape.ensure_same(&other.shape)?;
        let raw = self
            .generators
            .par_iter()
            .flat_map_iter(|a| {
                other
                    .generators
                    .iter()
                    .map(move |b| a.multiply_unchecked(b))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::minimalize_unchecked(&self.shape, raw))
    }

    /// `I^k` for `k ≥ 1`.
    pub fn power(&self, k: u32) -> Result<MonomialIdeal> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "power exponent must be at least 1".into(),
            ));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// `I : u`, generated by `g / gcd(g, u)` over `g ∈ G(I)`.
    pub fn colon(&self, u: &Monomial) -> Result<MonomialIdeal> {
        self.shape.ensure_same(u.shape())?;
        let raw = self.generators.iter().map(|g| g.strip_common(u)).collect();
        Ok(Self::minimalize_unchecked(&self.shape, raw))
    }

    /// Monomial localization: every variable outside `prime` is set to 1.
    pub fn localize(&self, prime: &MonomialPrime) -> Result<MonomialIdeal> {
        self.shape.ensure_same(&prime.shape)?;
        let mut keep = vec![false; self.shape.variables()];
        for &v in &prime.variables {
            keep[self.shape.flat_index(v)?] = true;
        }
        let raw = self.generators.iter().map(|g| g.project(&keep)).collect();
        Ok(Self::minimalize_unchecked(&self.shape, raw))
    }

    /// Equality of canonical generator sets, rejecting mismatched shapes.
    pub fn equals(&self, other: &MonomialIdeal) -> Result<bool> {
        self.shape.ensure_same(&other.shape)?;
        Ok(self.generators == other.generators)
    }

    pub fn is_equigenerated(&self) -> bool {
        self.degree().is_some()
    }

    /// The common degree of the generators, if there is one.
    pub fn degree(&self) -> Option<u64> {
        let first = self.generators.first()?.modulus();
        self.generators
            .iter()
            .all(|g| g.modulus() == first)
            .then_some(first)
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialIdeal[{}](", self.shape)?;
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

/// A monomial prime ideal, generated by a nonempty set of variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialPrime {
    shape: BlockShape,
    variables: BTreeSet<VariableIndex>,
}

impl MonomialPrime {
    pub fn new(
        shape: &BlockShape,
        variables: impl IntoIterator<Item = VariableIndex>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for v in variables {
            shape.flat_index(v)?;
            if !set.insert(v) {
                return Err(Error::InvalidArgument(format!("variable {v} listed twice")));
            }
        }
        if set.is_empty() {
            return Err(Error::InvalidArgument(
                "a monomial prime needs at least one variable".into(),
            ));
        }
        Ok(Self {
            shape: shape.clone(),
            variables: set,
        })
    }

    /// Parses a comma-separated variable list such as `x[1,1],x[2,1]`.
    pub fn parse(shape: &BlockShape, text: &str) -> Result<Self> {
        let mut vars = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let end = rest
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unterminated variable in {text:?}")))?;
            vars.push(rest[..=end].parse::<VariableIndex>()?);
            rest = rest[end + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("expected ',' in {text:?}")));
            }
        }
        Self::new(shape, vars)
    }

    /// Every monomial prime of the shape, i.e. all nonempty variable subsets.
    pub fn all(shape: &BlockShape) -> Result<Vec<MonomialPrime>> {
        let n = shape.variables();
        if n > 20 {
            return Err(Error::TooManyVariables { max: 20, got: n });
        }
        Ok((1u32..(1 << n))
            .map(|mask| MonomialPrime {
                shape: shape.clone(),
                variables: (0..n)
                    .filter(|k| mask & (1 << k) != 0)
                    .map(|k| shape.variable(k))
                    .collect(),
            })
            .collect())
    }

    pub fn variables(&self) -> &BTreeSet<VariableIndex> {
        &self.variables
    }
}

impl fmt::Display for MonomialPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.variables.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", vars.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &[usize]) -> BlockShape {
        BlockShape::new(s).unwrap()
    }

    fn ideal(s: &BlockShape, gens: &[&str]) -> MonomialIdeal {
        MonomialIdeal::minimalize(s, gens.iter().map(|g| Monomial::parse(s, g).unwrap())).unwrap()
    }

    #[test]
    fn minimalize_drops_multiples() {
        let s = shape(&[2, 2]);
        let i = ideal(&s, &["x[1,1]", "x[1,1]*x[2,1]", "x[1,1]"]);
        assert_eq!(i.generators(), &[Monomial::parse(&s, "x[1,1]").unwrap()]);
        let anti = ideal(&s, &["x[1,1]*x[2,1]", "x[1,2]*x[2,2]"]);
        assert_eq!(anti.len(), 2);
        assert!(i.is_equigenerated());
        let mixed = MonomialIdeal::minimalize(&s, [Monomial::one(&shape(&[1]))]);
        assert!(matches!(mixed, Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn membership() {
        let s = shape(&[2, 2]);
        let i2 = ideal(
            &s,
            &[
                "x[1,1]*x[2,1]",
                "x[1,1]*x[2,2]",
                "x[1,2]*x[2,1]",
                "x[1,2]*x[2,2]",
            ],
        );
        assert!(i2
            .contains(&Monomial::parse(&s, "x[1,1]^2*x[2,1]").unwrap())
            .unwrap());
        assert!(!i2
            .contains(&Monomial::parse(&s, "x[1,1]^2").unwrap())
            .unwrap());
        let other = shape(&[1, 1, 1]);
        assert!(i2
            .contains(&Monomial::parse(&other, "x[1,1]*x[2,1]*x[3,1]").unwrap())
            .is_err());
    }

    #[test]
    fn zero_and_unit_boundaries() {
        let s = shape(&[2, 2]);
        let i = ideal(&s, &["x[1,1]*x[2,1]", "x[1,2]^2"]);
        let zero = MonomialIdeal::zero(&s);
        let unit = MonomialIdeal::unit(&s);
        assert_eq!(i.add(&zero).unwrap(), i);
        assert_eq!(i.product(&unit).unwrap(), i);
        assert!(i.product(&zero).unwrap().is_zero());
        assert!(zero.power(3).unwrap().is_zero());
        assert_eq!(i.power(1).unwrap(), i);
        assert!(i.power(0).is_err());
        assert!(unit.is_unit());
        assert!(!zero.is_equigenerated());
    }

    #[test]
    fn product_of_veronese_factors() {
        let s = shape(&[2, 2, 2]);
        let l132 = ideal(&s, &["x[1,1]^2*x[1,2]", "x[1,1]*x[1,2]^2"]);
        let l242 = ideal(&s, &["x[2,1]^2*x[2,2]^2"]);
        let p = l132.product(&l242).unwrap();
        assert_eq!(
            p,
            ideal(
                &s,
                &[
                    "x[1,1]^2*x[1,2]*x[2,1]^2*x[2,2]^2",
                    "x[1,1]*x[1,2]^2*x[2,1]^2*x[2,2]^2"
                ]
            )
        );
    }

    #[test]
    fn colon_cases() {
        let s = shape(&[1, 1, 1]);
        let i = ideal(&s, &["x[1,1]*x[2,1]"]);
        assert_eq!(i.colon(&Monomial::parse(&s, "x[3,1]").unwrap()).unwrap(), i);
        assert_eq!(i.colon(&Monomial::one(&s)).unwrap(), i);
        assert!(i
            .colon(&Monomial::parse(&s, "x[1,1]*x[2,1]^3").unwrap())
            .unwrap()
            .is_unit());
    }

    #[test]
    fn localization() {
        let s = shape(&[2, 2]);
        let edge = ideal(
            &s,
            &[
                "x[1,1]*x[2,1]",
                "x[1,1]*x[2,2]",
                "x[1,2]*x[2,1]",
                "x[1,2]*x[2,2]",
                "x[1,1]^2",
                "x[1,2]^2",
                "x[2,1]^2",
                "x[2,2]^2",
            ],
        );
        let p = MonomialPrime::parse(&s, "x[1,1]").unwrap();
        assert!(edge.localize(&p).unwrap().is_unit());
        let all = MonomialPrime::new(&s, s.all_variables()).unwrap();
        assert_eq!(edge.localize(&all).unwrap(), edge);
    }

    #[test]
    fn primes() {
        let s = shape(&[2, 2]);
        assert_eq!(MonomialPrime::all(&s).unwrap().len(), 15);
        let p = MonomialPrime::parse(&s, "x[1,1], x[2,2]").unwrap();
        assert_eq!(p.to_string(), "(x[1,1],x[2,2])");
        assert!(MonomialPrime::parse(&s, "").is_err());
        assert!(MonomialPrime::parse(&s, "x[1,1],x[1,1]").is_err());
        assert!(MonomialPrime::parse(&s, "x[3,1]").is_err());
    }
}
