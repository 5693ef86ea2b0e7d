//! Rank-2 commutative Frobenius algebras over an exact ring.
//!
//! Basis elements are indexed `0` and `1`; index `0` is the first label in the
//! input (canonically `a`). Tables use the layout
//! `mult[i][j][k]`: `x_i · x_j = Σ_k mult[i][j][k] x_k`, and
//! `comult[i][j][k]`: `Δ(x_i) = Σ_{j,k} comult[i][j][k] x_j ⊗ x_k`.

use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;

use crate::error::{invalid, parse_err, Error, Result};
use crate::ring::{parse_rational, Coeff, RingSpec};

pub type Vec2 = [Coeff; 2];
pub type Tensor2 = [[Coeff; 2]; 2];
pub type Table = [[[Coeff; 2]; 2]; 2];

/// Algebra tables as read from a file or preset, before being placed in a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    pub ring: Option<RingSpec>,
    pub basis: [String; 2],
    pub mult: [BigRational; 8],
    pub counit: [BigRational; 2],
    pub unit: Option<[BigRational; 2]>,
    pub comult: Option<[BigRational; 8]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusAlgebra {
    pub ring: RingSpec,
    pub basis: [String; 2],
    pub mult: Table,
    pub counit: Vec2,
    pub unit: Option<Vec2>,
    pub comult: Option<Table>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| c.failure.is_some())
    }

    pub fn failed(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c.name == name && c.failure.is_some())
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            let msg = self
                .failures()
                .map(|c| format!("{}: {}", c.name, c.failure.as_deref().unwrap_or("")))
                .collect::<Vec<_>>()
                .join("; ");
            Err(invalid!("Frobenius algebra validation failed: {msg}"))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.failure {
                None => writeln!(f, "{}: pass", c.name)?,
                Some(why) => writeln!(f, "{}: FAIL ({why})", c.name)?,
            }
        }
        write!(f, "overall: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

pub const DEGENERATE_PAIRING: &str = "degenerate pairing";

fn zero_table() -> Table {
    Default::default()
}

fn ix3(flat: usize) -> (usize, usize, usize) {
    (flat / 4, (flat / 2) % 2, flat % 2)
}

impl AlgebraSpec {
    /// Places the rational tables in `ring`.
    pub fn instantiate(&self, ring: RingSpec) -> Result<FrobeniusAlgebra> {
        let embed_table = |flat: &[BigRational; 8]| -> Result<Table> {
            let mut t = zero_table();
            for (n, q) in flat.iter().enumerate() {
                let (i, j, k) = ix3(n);
                t[i][j][k] = ring.embed(q)?;
            }
            Ok(t)
        };
        let embed2 = |v: &[BigRational; 2]| -> Result<Vec2> { Ok([ring.embed(&v[0])?, ring.embed(&v[1])?]) };
        Ok(FrobeniusAlgebra {
            ring,
            basis: self.basis.clone(),
            mult: embed_table(&self.mult)?,
            counit: embed2(&self.counit)?,
            unit: self.unit.as_ref().map(embed2).transpose()?,
            comult: self.comult.as_ref().map(embed_table).transpose()?,
        })
    }

    pub fn preset(name: &str) -> Result<Self> {
        let r = |s: &str| parse_rational(s).expect("preset literal");
        let t = |xs: [&str; 8]| xs.map(r);
        let diag_mult = t(["1", "0", "0", "0", "0", "0", "0", "1"]);
        match name {
            "lee" => Ok(AlgebraSpec {
                ring: None,
                basis: ["a".into(), "b".into()],
                mult: diag_mult,
                counit: [r("1/2"), r("-1/2")],
                unit: Some([r("1"), r("1")]),
                comult: Some(t(["2", "0", "0", "0", "0", "0", "0", "-2"])),
            }),
            // Basis {X, 1+X} of F2[X]/(X^2 - X).
            "barnatan" => Ok(AlgebraSpec {
                ring: Some(RingSpec::PrimeField(2)),
                basis: ["X".into(), "1+X".into()],
                mult: diag_mult,
                counit: [r("1"), r("1")],
                unit: Some([r("1"), r("1")]),
                comult: Some(t(["1", "0", "0", "0", "0", "0", "0", "1"])),
            }),
            "split" => Ok(AlgebraSpec {
                ring: Some(RingSpec::Integers),
                basis: ["a".into(), "b".into()],
                mult: diag_mult,
                counit: [r("1"), r("1")],
                unit: Some([r("1"), r("1")]),
                comult: Some(t(["1", "0", "0", "0", "0", "0", "0", "1"])),
            }),
            "khovanov" => Ok(AlgebraSpec {
                ring: None,
                basis: ["1".into(), "X".into()],
                // 1·1 = 1, 1·X = X, X·1 = X, X·X = 0
                mult: t(["1", "0", "0", "1", "0", "1", "0", "0"]),
                counit: [r("0"), r("1")],
                unit: Some([r("1"), r("0")]),
                // Δ(1) = 1⊗X + X⊗1, Δ(X) = X⊗X
                comult: Some(t(["0", "1", "1", "0", "0", "0", "0", "1"])),
            }),
            _ => Err(invalid!("unknown preset '{name}' (expected lee, barnatan, split or khovanov)")),
        }
    }

    /// Parses the `key = values` algebra file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut ring_name: Option<String> = None;
        let mut modulus: Option<u64> = None;
        let mut basis: Option<[String; 2]> = None;
        let mut mult = None;
        let mut counit = None;
        let mut unit = None;
        let mut comult = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| parse_err!("line {}: expected 'key = value'", lineno + 1))?;
            let key = key.trim();
            let toks: Vec<&str> = value.split([' ', '\t', ',']).filter(|s| !s.is_empty()).collect();
            if !seen.insert(key.to_string()) {
                return Err(parse_err!("line {}: duplicate key '{key}'", lineno + 1));
            }
            let rationals = |n: usize| -> Result<Vec<BigRational>> {
                if toks.len() != n {
                    return Err(parse_err!("line {}: '{key}' needs {n} coefficients, got {}", lineno + 1, toks.len()));
                }
                toks.iter().map(|t| parse_rational(t)).collect()
            };
            match key {
                "ring" => {
                    if toks.len() != 1 {
                        return Err(parse_err!("line {}: 'ring' takes one value", lineno + 1));
                    }
                    ring_name = Some(toks[0].to_string());
                }
                "modulus" => {
                    let m = toks
                        .first()
                        .filter(|_| toks.len() == 1)
                        .and_then(|t| t.parse::<u64>().ok())
                        .ok_or_else(|| parse_err!("line {}: malformed modulus", lineno + 1))?;
                    modulus = Some(m);
                }
                "basis" => {
                    if toks.len() != 2 || toks[0] == toks[1] {
                        return Err(parse_err!("line {}: 'basis' needs two distinct labels", lineno + 1));
                    }
                    basis = Some([toks[0].to_string(), toks[1].to_string()]);
                }
                "mult" => mult = Some(<[BigRational; 8]>::try_from(rationals(8)?).unwrap()),
                "comult" => comult = Some(<[BigRational; 8]>::try_from(rationals(8)?).unwrap()),
                "counit" => counit = Some(<[BigRational; 2]>::try_from(rationals(2)?).unwrap()),
                "unit" => unit = Some(<[BigRational; 2]>::try_from(rationals(2)?).unwrap()),
                _ => return Err(parse_err!("line {}: unknown key '{key}'", lineno + 1)),
            }
        }

        let ring = match (ring_name, modulus) {
            (Some(name), m) => Some(RingSpec::from_name(&name, m)?),
            (None, Some(_)) => return Err(parse_err!("'modulus' given without 'ring'")),
            (None, None) => None,
        };
        Ok(AlgebraSpec {
            ring,
            basis: basis.unwrap_or_else(|| ["a".into(), "b".into()]),
            mult: mult.ok_or_else(|| parse_err!("missing key 'mult'"))?,
            counit: counit.ok_or_else(|| parse_err!("missing key 'counit'"))?,
            unit,
            comult,
        })
    }
}

impl FrobeniusAlgebra {
    fn zero2(&self) -> Vec2 {
        [self.ring.zero(), self.ring.zero()]
    }

    fn basis_vec(&self, i: usize) -> Vec2 {
        let mut v = self.zero2();
        v[i] = self.ring.one();
        v
    }

    fn add2(&self, x: &mut Vec2, c: &Coeff, y: &Vec2) {
        for k in 0..2 {
            x[k] = self.ring.add(&x[k], &self.ring.mul(c, &y[k]));
        }
    }

    /// `u · v` using the multiplication table.
    pub fn mul_vec(&self, u: &Vec2, v: &Vec2) -> Vec2 {
        let mut out = self.zero2();
        for i in 0..2 {
            for j in 0..2 {
                let c = self.ring.mul(&u[i], &v[j]);
                if !c.is_zero() {
                    self.add2(&mut out, &c, &self.mult[i][j]);
                }
            }
        }
        out
    }

    pub fn counit_of(&self, u: &Vec2) -> Coeff {
        let r = &self.ring;
        r.add(&r.mul(&u[0], &self.counit[0]), &r.mul(&u[1], &self.counit[1]))
    }

    /// Gram matrix of ⟨x, y⟩ = ε(xy).
    pub fn gram(&self) -> Tensor2 {
        let mut g: Tensor2 = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                g[i][j] = self.counit_of(&self.mult[i][j]);
            }
        }
        g
    }

    fn gram_inverse(&self) -> Option<Tensor2> {
        let r = &self.ring;
        let g = self.gram();
        let det = r.sub(&r.mul(&g[0][0], &g[1][1]), &r.mul(&g[0][1], &g[1][0]));
        let di = r.inv(&det)?;
        Some([
            [r.mul(&g[1][1], &di), r.neg(&r.mul(&g[0][1], &di))],
            [r.neg(&r.mul(&g[1][0], &di)), r.mul(&g[0][0], &di)],
        ])
    }

    /// The unit: the stored one, or the unique element with ⟨1, x⟩ = ε(x).
    pub fn unit_vec(&self) -> Option<Vec2> {
        if let Some(u) = &self.unit {
            return Some(u.clone());
        }
        let gi = self.gram_inverse()?;
        let r = &self.ring;
        let mut u = self.zero2();
        for i in 0..2 {
            for j in 0..2 {
                u[i] = r.add(&u[i], &r.mul(&gi[i][j], &self.counit[j]));
            }
        }
        Some(u)
    }

    /// Comultiplication fixed by the pairing: Δ(x) = Σ_{i,j} x·e_i ⊗ g^{ij} e_j.
    pub fn comultiplication_from_pairing(&self) -> Option<Table> {
        let gi = self.gram_inverse()?;
        let r = &self.ring;
        let mut t = zero_table();
        for x in 0..2 {
            for i in 0..2 {
                let xe = &self.mult[x][i];
                for j in 0..2 {
                    for k in 0..2 {
                        let c = r.mul(&xe[k], &gi[i][j]);
                        t[x][k][j] = r.add(&t[x][k][j], &c);
                    }
                }
            }
        }
        Some(t)
    }

    /// The comultiplication used for the complex: stored, else derived.
    pub fn comult_table(&self) -> Result<Table> {
        if let Some(c) = &self.comult {
            return Ok(c.clone());
        }
        if self.is_diagonal() {
            return self.derive_comultiplication();
        }
        self.comultiplication_from_pairing()
            .ok_or_else(|| invalid!("cannot derive comultiplication: {DEGENERATE_PAIRING}"))
    }

    fn comul_vec(&self, comult: &Table, u: &Vec2) -> Tensor2 {
        let r = &self.ring;
        let mut out: Tensor2 = Default::default();
        for i in 0..2 {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..2 {
                for k in 0..2 {
                    out[j][k] = r.add(&out[j][k], &r.mul(&u[i], &comult[i][j][k]));
                }
            }
        }
        out
    }

    /// Checks every axiom and lists all failures.
    pub fn validate(&self) -> ValidationReport {
        let r = &self.ring;
        let mut checks = Vec::new();
        let mut check = |name: &'static str, failure: Option<String>| checks.push(AxiomCheck { name, failure });

        let members = self
            .mult
            .iter()
            .flatten()
            .flatten()
            .chain(self.counit.iter())
            .chain(self.unit.iter().flatten())
            .chain(self.comult.iter().flatten().flatten().flatten())
            .all(|c| r.contains(c));
        check("coefficients in ring", (!members).then(|| format!("some entry is not an element of {}", r.name())));

        let label = |i: usize| self.basis[i].as_str();

        let mut comm = None;
        for i in 0..2 {
            for j in 0..2 {
                if self.mult[i][j] != self.mult[j][i] {
                    comm = Some(format!("{}·{} != {}·{}", label(i), label(j), label(j), label(i)));
                }
            }
        }
        check("commutativity", comm);

        let mut assoc = None;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let (xi, xj, xk) = (self.basis_vec(i), self.basis_vec(j), self.basis_vec(k));
                    let lhs = self.mul_vec(&self.mul_vec(&xi, &xj), &xk);
                    let rhs = self.mul_vec(&xi, &self.mul_vec(&xj, &xk));
                    if lhs != rhs {
                        assoc = Some(format!(
                            "({}{}){} != {}({}{})",
                            label(i),
                            label(j),
                            label(k),
                            label(i),
                            label(j),
                            label(k)
                        ));
                    }
                }
            }
        }
        check("associativity", assoc);

        let gram_ok = self.gram_inverse().is_some();
        check(
            "non-degenerate pairing",
            (!gram_ok).then(|| format!("{DEGENERATE_PAIRING}: Gram matrix not invertible over {}", r.name())),
        );

        let unit = self.unit_vec();
        let unit_fail = match &unit {
            None => Some("no unit given and none derivable".to_string()),
            Some(u) => (0..2)
                .find(|&i| {
                    let x = self.basis_vec(i);
                    self.mul_vec(u, &x) != x || self.mul_vec(&x, u) != x
                })
                .map(|i| format!("1·{} != {}", label(i), label(i))),
        };
        check("unit law", unit_fail);

        let comult = match &self.comult {
            Some(c) => Some(c.clone()),
            None => self.comult_table().ok(),
        };
        let Some(comult) = comult else {
            for name in ["coassociativity", "counit law", "Frobenius relation", "pairing recovers multiplication"] {
                check(name, Some("no comultiplication available".into()));
            }
            return ValidationReport { checks };
        };

        let mut coassoc = None;
        for i in 0..2 {
            let d = &comult[i];
            let mut lhs: Table = zero_table();
            let mut rhs: Table = zero_table();
            for j in 0..2 {
                for k in 0..2 {
                    if d[j][k].is_zero() {
                        continue;
                    }
                    for p in 0..2 {
                        for q in 0..2 {
                            // (Δ⊗id): split the left factor; (id⊗Δ): split the right factor
                            lhs[p][q][k] = r.add(&lhs[p][q][k], &r.mul(&d[j][k], &comult[j][p][q]));
                            rhs[j][p][q] = r.add(&rhs[j][p][q], &r.mul(&d[j][k], &comult[k][p][q]));
                        }
                    }
                }
            }
            if lhs != rhs {
                coassoc = Some(format!("(Δ⊗id)Δ({}) != (id⊗Δ)Δ({})", label(i), label(i)));
            }
        }
        check("coassociativity", coassoc);

        let mut counit_fail = None;
        for i in 0..2 {
            let mut left = self.zero2();
            let mut right = self.zero2();
            for j in 0..2 {
                for k in 0..2 {
                    let c = &comult[i][j][k];
                    left[k] = r.add(&left[k], &r.mul(c, &self.counit[j]));
                    right[j] = r.add(&right[j], &r.mul(c, &self.counit[k]));
                }
            }
            let x = self.basis_vec(i);
            if left != x || right != x {
                counit_fail = Some(format!("(ε⊗id)Δ({}) != {}", label(i), label(i)));
            }
        }
        check("counit law", counit_fail);

        let mut frob = None;
        for i in 0..2 {
            for j in 0..2 {
                let lhs = self.comul_vec(&comult, &self.mult[i][j]);
                let mut mid: Tensor2 = Default::default();
                let mut other: Tensor2 = Default::default();
                for k in 0..2 {
                    for l in 0..2 {
                        // (m⊗id)(id⊗Δ)(x_i⊗x_j) and (id⊗m)(Δ⊗id)(x_i⊗x_j)
                        let c = &comult[j][k][l];
                        if !c.is_zero() {
                            for p in 0..2 {
                                mid[p][l] = r.add(&mid[p][l], &r.mul(c, &self.mult[i][k][p]));
                            }
                        }
                        let c = &comult[i][k][l];
                        if !c.is_zero() {
                            for p in 0..2 {
                                other[k][p] = r.add(&other[k][p], &r.mul(c, &self.mult[l][j][p]));
                            }
                        }
                    }
                }
                if lhs != mid || lhs != other {
                    frob = Some(format!("Δ({}·{}) differs from (m⊗id)(id⊗Δ)", label(i), label(j)));
                }
            }
        }
        check("Frobenius relation", frob);

        let gram = self.gram();
        let mut pairing = None;
        for i in 0..2 {
            for j in 0..2 {
                let mut out = self.zero2();
                for k in 0..2 {
                    for l in 0..2 {
                        let c = r.mul(&comult[i][k][l], &gram[l][j]);
                        out[k] = r.add(&out[k], &c);
                    }
                }
                if out != self.mult[i][j] {
                    pairing = Some(format!("(id⊗⟨,⟩)(Δ⊗id)({}⊗{}) != {}·{}", label(i), label(j), label(i), label(j)));
                }
            }
        }
        check("pairing recovers multiplication", pairing);

        ValidationReport { checks }
    }

    /// a² = a, b² = b, ab = 0 in the given basis.
    pub fn is_diagonal(&self) -> bool {
        let r = &self.ring;
        let e = |i: usize, j: usize, k: usize| &self.mult[i][j][k];
        e(0, 0, 0) == &r.one()
            && e(0, 0, 1).is_zero()
            && e(1, 1, 1) == &r.one()
            && e(1, 1, 0).is_zero()
            && (0..2).all(|k| e(0, 1, k).is_zero() && e(1, 0, k).is_zero())
    }

    /// Δ(a) = ε(a)⁻¹ a⊗a, Δ(b) = ε(b)⁻¹ b⊗b. Fails if the algebra is not
    /// diagonal, if a counit value is not a unit, or if a stored
    /// comultiplication disagrees.
    pub fn derive_comultiplication(&self) -> Result<Table> {
        if !self.is_diagonal() {
            return Err(invalid!("algebra is not diagonal in the basis {{{}, {}}}", self.basis[0], self.basis[1]));
        }
        let mut t = zero_table();
        for i in 0..2 {
            let inv = self.ring.inv(&self.counit[i]).ok_or_else(|| {
                invalid!("counit not invertible: ε({}) = {} in {}", self.basis[i], self.counit[i], self.ring.name())
            })?;
            t[i][i][i] = inv;
        }
        if let Some(stored) = &self.comult {
            if stored != &t {
                return Err(Error::TheoremViolation(format!(
                    "stored comultiplication differs from ε⁻¹-formula: {}",
                    format_table(&t)
                )));
            }
        }
        Ok(t)
    }

    /// Copy with the comultiplication replaced by `comult`.
    pub fn with_comult(&self, comult: Table) -> Self {
        FrobeniusAlgebra { comult: Some(comult), ..self.clone() }
    }

    pub fn is_unit_coeff(&self, c: &Coeff) -> bool {
        self.ring.is_unit(c)
    }
}

pub fn format_table(t: &Table) -> String {
    t.iter().flatten().flatten().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for FrobeniusAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring = {}", self.ring.name())?;
        writeln!(f, "basis = {} {}", self.basis[0], self.basis[1])?;
        writeln!(f, "mult = {}", format_table(&self.mult))?;
        write!(f, "counit = {} {}", self.counit[0], self.counit[1])?;
        if let Some(u) = &self.unit {
            write!(f, "\nunit = {} {}", u[0], u[1])?;
        }
        if let Some(c) = &self.comult {
            write!(f, "\ncomult = {}", format_table(c))?;
        }
        Ok(())
    }
}
