use serde::Serialize;

use crate::arith::{is_prime_u64, is_squarefree, legendre};
use crate::error::ClassifyError;

/// `K = Q(sqrt(q1 q2), sqrt(eta d))` with `d = delta * prod(primes) = 3 mod 4`
/// and `eta = 2` when `two` is set (forms D and E).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Q1Q2Input {
    pub q1: u64,
    pub q2: u64,
    pub delta: u64,
    /// the odd primes r, s, t, ... of d other than delta, in the caller's order
    pub primes: Vec<u64>,
    pub two: bool,
}

impl Q1Q2Input {
    pub fn new(q1: u64, q2: u64, delta: u64, primes: Vec<u64>, two: bool) -> Result<Self, ClassifyError> {
        let k = Q1Q2Input { q1, q2, delta, primes, two };
        k.validate()?;
        Ok(k)
    }

    /// As [`Q1Q2Input::new`] but choosing delta: 1 when the primes multiply to
    /// 3 mod 4, otherwise q1 (the only choice item 2 of the first main
    /// theorem admits for r = 1 mod 4).
    pub fn resolve(q1: u64, q2: u64, primes: Vec<u64>, two: bool) -> Result<Self, ClassifyError> {
        let prod = primes.iter().fold(1u64, |a, &p| a.wrapping_mul(p) % 4);
        let delta = if prod == 3 { 1 } else { q1 };
        Q1Q2Input::new(q1, q2, delta, primes, two)
    }

    pub fn d(&self) -> i64 {
        (self.delta * self.primes.iter().product::<u64>()) as i64
    }

    /// The radicand `d` or `2d`.
    pub fn radicand(&self) -> i64 {
        if self.two {
            2 * self.d()
        } else {
            self.d()
        }
    }

    pub fn m(&self) -> i64 {
        (self.q1 * self.q2) as i64
    }

    /// `'D'` for q1 = 7 mod 8, `'E'` for q1 = 3 mod 8.
    pub fn form(&self) -> char {
        if self.q1 % 8 == 7 {
            'D'
        } else {
            'E'
        }
    }

    pub fn gens(&self) -> [i64; 2] {
        [self.m(), self.radicand()]
    }

    fn validate(&self) -> Result<(), ClassifyError> {
        let (q1, q2) = (self.q1, self.q2);
        prime(q1, "q1")?;
        prime(q2, "q2")?;
        if q1 % 4 != 3 || q2 % 8 != 3 || q1 == q2 {
            return bad(format!("need q1 = 3 mod 4, q2 = 3 mod 8 distinct, got ({q1}, {q2})"));
        }
        if ![1, q1, q2].contains(&self.delta) {
            return bad(format!("delta = {} not in {{1, q1, q2}}", self.delta));
        }
        if self.primes.is_empty() {
            return bad("d needs at least one prime besides delta".into());
        }
        for (i, &p) in self.primes.iter().enumerate() {
            prime(p, "r")?;
            if p == 2 || p == q1 || p == q2 || self.primes[..i].contains(&p) {
                return bad(format!("prime {p} repeated, even, or equal to q1 or q2"));
            }
        }
        let mut d: u64 = self.delta;
        for &p in &self.primes {
            d = d
                .checked_mul(p)
                .filter(|&d| d < 1 << 40)
                .ok_or_else(|| ClassifyError::Malformed("d too large".into()))?;
        }
        if !self.two && self.delta == 1 && self.primes.len() <= 2 {
            let m = self.m();
            if let Some(&r) = self.primes.iter().find(|&&r| r % 8 == 1 && legendre(m, r) == 1) {
                return Err(ClassifyError::ExcludedL { r });
            }
        }
        if d % 4 != 3 {
            return bad(format!("d = {d} is not 3 mod 4"));
        }
        Ok(())
    }
}

/// A validated tuple of one of the input families.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "form")]
pub enum FamilyInput {
    /// forms D and E
    Q1Q2(Q1Q2Input),
    /// `Q(sqrt p, sqrt(q1 q2))`, form F a or b
    PQ1Q2 { p: u64, q1: u64, q2: u64 },
    /// `Q(sqrt p, sqrt d)` with d = 3 mod 4 prime, form F c
    PD { p: u64, d: u64 },
    /// `Q(sqrt p1, sqrt p2)` with p1 = p2 = 1 mod 4
    PP { p1: u64, p2: u64 },
    /// `Q(sqrt(eta1 q), sqrt(eta2 r))` with q = 3 mod 4
    EtaQR { eta1: u64, eta2: u64, q: u64, r: u64 },
    /// `Q(sqrt(eta1 q1 q2), sqrt(eta2 delta r))` with delta r = 1 mod 4
    EtaQ1Q2R { eta1: u64, eta2: u64, q1: u64, q2: u64, delta: u64, r: u64 },
    /// the field `K_nu = Q(sqrt(nu q), sqrt(rs))`
    ThirdMain { q: u64, r: u64, s: u64, nu: u64 },
    /// an arbitrary real biquadratic field, recognised on demand
    Field { gens: [i64; 2] },
}

fn bad<T>(msg: String) -> Result<T, ClassifyError> {
    Err(ClassifyError::Malformed(msg))
}

fn prime(p: u64, name: &str) -> Result<(), ClassifyError> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        bad(format!("{name} = {p} is not prime"))
    }
}

fn eta(e: u64) -> Result<(), ClassifyError> {
    if e == 1 || e == 2 {
        Ok(())
    } else {
        bad(format!("eta/nu = {e} not in {{1, 2}}"))
    }
}

fn distinct(ps: &[u64]) -> Result<(), ClassifyError> {
    for i in 0..ps.len() {
        if ps[..i].contains(&ps[i]) {
            return bad(format!("primes {ps:?} not distinct"));
        }
    }
    Ok(())
}

impl FamilyInput {
    pub fn validate(&self) -> Result<(), ClassifyError> {
        match *self {
            FamilyInput::Q1Q2(ref k) => k.validate(),
            FamilyInput::PQ1Q2 { p, q1, q2 } => {
                prime(p, "p")?;
                prime(q1, "q1")?;
                prime(q2, "q2")?;
                distinct(&[p, q1, q2])?;
                if p % 4 != 1 || q1 % 4 != 3 || q2 % 4 != 3 {
                    return bad("need p = 1, q1 = q2 = 3 mod 4".into());
                }
                if legendre(q2 as i64, p) != -1 && q2 % 8 != 3 {
                    return bad("need (q2/p) = -1 or q2 = 3 mod 8".into());
                }
                Ok(())
            }
            FamilyInput::PD { p, d } => {
                prime(p, "p")?;
                prime(d, "d")?;
                if p % 4 != 1 || d % 4 != 3 {
                    return bad("need p = 1 and d = 3 mod 4".into());
                }
                if legendre(p as i64, d) != -1 && p % 8 != 5 {
                    return bad("need (p/d) = -1 or p = 5 mod 8".into());
                }
                Ok(())
            }
            FamilyInput::PP { p1, p2 } => {
                prime(p1, "p1")?;
                prime(p2, "p2")?;
                distinct(&[p1, p2])?;
                if p1 % 4 != 1 || p2 % 4 != 1 {
                    return bad("need p1 = p2 = 1 mod 4".into());
                }
                Ok(())
            }
            FamilyInput::EtaQR { eta1, eta2, q, r } => {
                eta(eta1)?;
                eta(eta2)?;
                prime(q, "q")?;
                prime(r, "r")?;
                distinct(&[q, r])?;
                if q % 4 != 3 || r == 2 {
                    return bad("need q = 3 mod 4 and r odd".into());
                }
                Ok(())
            }
            FamilyInput::EtaQ1Q2R { eta1, eta2, q1, q2, delta, r } => {
                eta(eta1)?;
                eta(eta2)?;
                prime(q1, "q1")?;
                prime(q2, "q2")?;
                prime(r, "r")?;
                distinct(&[q1, q2, r])?;
                if q1 % 4 != 3 || q2 % 8 != 3 || r == 2 {
                    return bad("need q1 = 3 mod 4, q2 = 3 mod 8, r odd".into());
                }
                if ![1, q1, q2].contains(&delta) || (delta * r) % 4 != 1 {
                    return bad(format!("need delta in {{1, q1, q2}} with delta r = 1 mod 4, got {delta}"));
                }
                Ok(())
            }
            FamilyInput::ThirdMain { q, r, s, nu } => {
                eta(nu)?;
                prime(q, "q")?;
                prime(r, "r")?;
                prime(s, "s")?;
                distinct(&[q, r, s])?;
                Ok(())
            }
            FamilyInput::Field { gens: [a, b] } => {
                if a <= 1 || b <= 1 || !is_squarefree(a) || !is_squarefree(b) || a == b {
                    return bad(format!("generators ({a}, {b}) are not distinct squarefree integers > 1"));
                }
                Ok(())
            }
        }
    }

    /// Squarefree generators of the biquadratic field.
    pub fn gens(&self) -> [i64; 2] {
        match *self {
            FamilyInput::Q1Q2(ref k) => k.gens(),
            FamilyInput::PQ1Q2 { p, q1, q2 } => [p as i64, (q1 * q2) as i64],
            FamilyInput::PD { p, d } => [p as i64, d as i64],
            FamilyInput::PP { p1, p2 } => [p1 as i64, p2 as i64],
            FamilyInput::EtaQR { eta1, eta2, q, r } => [(eta1 * q) as i64, (eta2 * r) as i64],
            FamilyInput::EtaQ1Q2R { eta1, eta2, q1, q2, delta, r } => {
                [(eta1 * q1 * q2) as i64, (eta2 * delta * r) as i64]
            }
            FamilyInput::ThirdMain { q, r, s, nu } => [(nu * q) as i64, (r * s) as i64],
            FamilyInput::Field { gens } => gens,
        }
    }

    /// The three quadratic subfields `Q(sqrt m)`.
    pub fn subfields(&self) -> [i64; 3] {
        let [a, b] = self.gens();
        let g = num_integer::gcd(a, b);
        [a, b, (a / g) * (b / g)]
    }

    /// Every typed reading of the field generated by `gens` among the
    /// families above, in a fixed order.
    pub fn recognize(gens: [i64; 2]) -> Vec<FamilyInput> {
        let f = FamilyInput::Field { gens };
        if f.validate().is_err() {
            return Vec::new();
        }
        let subs = f.subfields();
        let mut out = Vec::new();
        let mut push = |c: FamilyInput| {
            if c.validate().is_ok() && !out.contains(&c) {
                out.push(c);
            }
        };
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let (a, b) = (subs[i], subs[j]);
                let fa = crate::arith::factor_u64(a as u64);
                let fb = crate::arith::factor_u64(b as u64);
                let odd = |f: &[(u64, u32)]| f.iter().map(|x| x.0).filter(|&p| p != 2).collect::<Vec<_>>();
                let (oa, ob) = (odd(&fa), odd(&fb));
                let (ea, eb): (u64, u64) = (if a % 2 == 0 { 2 } else { 1 }, if b % 2 == 0 { 2 } else { 1 });
                // q1 q2 with d or 2d
                if a % 2 == 1 && oa.len() == 2 {
                    for (q1, q2) in [(oa[0], oa[1]), (oa[1], oa[0])] {
                        let dd = b / eb as i64;
                        let rest: Vec<u64> = ob.iter().copied().filter(|&p| p != q1 && p != q2).collect();
                        let delta = (dd as u64) / rest.iter().product::<u64>();
                        if let Ok(k) = Q1Q2Input::new(q1, q2, delta, rest.clone(), eb == 2) {
                            push(FamilyInput::Q1Q2(k));
                        }
                        if rest.len() == 1 {
                            push(FamilyInput::EtaQ1Q2R { eta1: ea, eta2: eb, q1, q2, delta, r: rest[0] });
                        }
                    }
                }
                if oa.len() == 2 && a % 2 == 0 {
                    for (q1, q2) in [(oa[0], oa[1]), (oa[1], oa[0])] {
                        let rest: Vec<u64> = ob.iter().copied().filter(|&p| p != q1 && p != q2).collect();
                        if rest.len() == 1 {
                            let delta = (b / eb as i64) as u64 / rest[0];
                            push(FamilyInput::EtaQ1Q2R { eta1: ea, eta2: eb, q1, q2, delta, r: rest[0] });
                        }
                    }
                }
                if oa.len() == 1 && ob.len() == 1 {
                    push(FamilyInput::EtaQR { eta1: ea, eta2: eb, q: oa[0], r: ob[0] });
                    if ea == 1 && eb == 1 {
                        let (p, d) = (oa[0], ob[0]);
                        if p < d {
                            push(FamilyInput::PP { p1: p, p2: d });
                        }
                    }
                }
                if ea == 1 && eb == 1 && oa.len() == 1 {
                    push(FamilyInput::PD { p: oa[0], d: b as u64 });
                }
                if ea == 1 && eb == 1 && oa.len() == 1 && ob.len() == 2 {
                    push(FamilyInput::PQ1Q2 { p: oa[0], q1: ob[0], q2: ob[1] });
                    push(FamilyInput::PQ1Q2 { p: oa[0], q1: ob[1], q2: ob[0] });
                }
            }
        }
        out
    }
}
