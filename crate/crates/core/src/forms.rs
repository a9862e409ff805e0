//! Indefinite binary quadratic forms: reduction, rho cycles, composition.

use std::collections::HashMap;

use crate::arith::factor_u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

fn isqrt_i64(d: i64) -> i64 {
    let mut s = (d as f64).sqrt() as i64;
    while s * s > d {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= d {
        s += 1;
    }
    s
}

/// Context for forms of one non-square discriminant `d > 0`.
#[derive(Clone, Copy, Debug)]
pub struct Disc {
    pub d: i64,
    s: i64,
}

impl Disc {
    pub fn new(d: i64) -> Self {
        let s = isqrt_i64(d);
        assert!(s * s != d, "square discriminant {d}");
        Disc { d, s }
    }

    pub fn is_reduced(&self, f: &Form) -> bool {
        let (a2, b) = (2 * f.a.abs() as i128, f.b as i128);
        let d = self.d as i128;
        b > 0 && b <= self.s as i128 && (a2 + b) * (a2 + b) > d && (a2 - b <= 0 || (a2 - b) * (a2 - b) < d)
    }

    /// The representative of `b mod 2|c|` used by the rho step.
    fn normal_b(&self, b: i64, c: i64) -> i64 {
        let c2 = 2 * c.abs();
        if c.abs() <= self.s {
            self.s - (self.s - b).rem_euclid(c2)
        } else {
            let r = b.rem_euclid(c2);
            if r > c.abs() {
                r - c2
            } else {
                r
            }
        }
    }

    pub fn rho(&self, f: &Form) -> Form {
        let b = self.normal_b(-f.b, f.c);
        let num = b as i128 * b as i128 - self.d as i128;
        let den = 4 * f.c as i128;
        debug_assert_eq!(num % den, 0);
        Form {
            a: f.c,
            b,
            c: (num / den) as i64,
        }
    }

    pub fn reduce(&self, f: &Form) -> Form {
        let mut g = *f;
        let mut guard = 0;
        while !self.is_reduced(&g) {
            g = self.rho(&g);
            guard += 1;
            assert!(guard < 10_000, "form reduction did not terminate for {f:?}");
        }
        g
    }

    pub fn principal(&self) -> Form {
        let b = self.d.rem_euclid(2);
        Form {
            a: 1,
            b,
            c: (b * b - self.d) / 4,
        }
    }

    /// All reduced forms (a, b, c) of this discriminant.
    pub fn reduced_forms(&self) -> Vec<Form> {
        let mut out = Vec::new();
        let mut b = if self.d % 2 == 0 { 2 } else { 1 };
        while b <= self.s {
            let n = (self.d - b * b) / 4;
            for a in divisors(n as u64) {
                let a = a as i64;
                let f = Form { a, b, c: -n / a };
                if self.is_reduced(&f) {
                    out.push(f);
                    out.push(Form { a: -a, b, c: n / a });
                }
            }
            b += 2;
        }
        out
    }

    /// Dirichlet composition, not reduced.
    pub fn compose(&self, f: &Form, g: &Form) -> Form {
        let (a1, b1) = (f.a as i128, f.b as i128);
        let (a2, b2) = (g.a as i128, g.b as i128);
        let d = self.d as i128;
        let h = (b1 + b2) / 2;
        let (d0, x0, y0) = ext_gcd(a1, a2);
        let (e, u, v) = ext_gcd(d0, h);
        let (x, y, z) = (u * x0, u * y0, v);
        let a3 = a1 * a2 / (e * e);
        let num = x * a1 * b2 + y * a2 * b1 + z * (b1 * b2 + d) / 2;
        debug_assert_eq!(num % e, 0);
        let m = 2 * a3.abs();
        let b3 = (num / e).rem_euclid(m);
        let c_num = b3 * b3 - d;
        debug_assert_eq!(c_num % (4 * a3), 0, "composition failed for {f:?} {g:?}");
        Form {
            a: a3 as i64,
            b: b3 as i64,
            c: (c_num / (4 * a3)) as i64,
        }
    }
}

/// Extended gcd with nonnegative gcd: returns (g, x, y), x a + y b = g.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds
}

/// Assigns each reduced form to its rho cycle.
pub fn cycles(disc: &Disc) -> (HashMap<Form, usize>, Vec<Form>) {
    let forms = disc.reduced_forms();
    let mut id: HashMap<Form, usize> = HashMap::with_capacity(forms.len());
    let mut reps = Vec::new();
    for f in forms {
        if id.contains_key(&f) {
            continue;
        }
        let c = reps.len();
        reps.push(f);
        let mut g = f;
        loop {
            id.insert(g, c);
            g = disc.rho(&g);
            if g == f {
                break;
            }
        }
    }
    (id, reps)
}

pub fn narrow_class_number(d: i64) -> u64 {
    let disc = Disc::new(d);
    cycles(&disc).1.len() as u64
}

/// Narrow class group realized on cycle representatives.
pub struct ClassGroup {
    disc: Disc,
    id: HashMap<Form, usize>,
    reps: Vec<Form>,
}

impl ClassGroup {
    pub fn new(d: i64) -> Self {
        let disc = Disc::new(d);
        let (id, reps) = cycles(&disc);
        ClassGroup { disc, id, reps }
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, f: &Form) -> usize {
        let r = self.disc.reduce(f);
        self.id[&r]
    }

    pub fn identity(&self) -> usize {
        self.class_of(&self.disc.principal())
    }

    /// The class of the principal ideals generated by elements of negative norm.
    pub fn minus_one_class(&self) -> usize {
        let p = self.disc.principal();
        self.class_of(&Form {
            a: -1,
            b: p.b,
            c: -p.c,
        })
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        let f = self.disc.compose(&self.reps[x], &self.reps[y]);
        self.class_of(&f)
    }

    fn pow2k(&self, mut x: usize, k: u32) -> usize {
        for _ in 0..k {
            x = self.mul(x, x);
        }
        x
    }

    /// Elementary divisors of the 2-Sylow subgroup of the group modulo `kernel`
    /// (a subgroup of order 1 or 2 given by its nontrivial element, if any).
    fn two_structure_mod(&self, kernel: Option<usize>) -> Vec<u64> {
        let h = self.order();
        let v = h.trailing_zeros();
        let odd = (h >> v) as u64;
        let e = self.identity();
        let in_ker = |x: usize| x == e || Some(x) == kernel;
        // project onto the 2-part: x -> x^odd
        let mut two_part: Vec<usize> = Vec::new();
        let mut seen = vec![false; h];
        for x in 0..h {
            let mut y = e;
            let mut base = x;
            let mut k = odd;
            while k > 0 {
                if k & 1 == 1 {
                    y = self.mul(y, base);
                }
                base = self.mul(base, base);
                k >>= 1;
            }
            if !seen[y] {
                seen[y] = true;
                two_part.push(y);
            }
        }
        let ksize = if kernel.is_some() { 2 } else { 1 };
        let mut ranks = vec![0u32];
        for j in 1..=v {
            let cnt = two_part
                .iter()
                .filter(|&&x| in_ker(self.pow2k(x, j)))
                .count()
                / ksize;
            ranks.push(cnt.trailing_zeros());
        }
        let mut divs = Vec::new();
        for j in 1..ranks.len() {
            let ge_j = ranks[j] - ranks[j - 1];
            let ge_next = if j + 1 < ranks.len() {
                ranks[j + 1] - ranks[j]
            } else {
                0
            };
            for _ in 0..(ge_j - ge_next) {
                divs.push(1u64 << j);
            }
        }
        divs.sort_unstable();
        divs
    }

    pub fn narrow_two_structure(&self) -> Vec<u64> {
        self.two_structure_mod(None)
    }

    pub fn wide_two_structure(&self) -> Vec<u64> {
        let j = self.minus_one_class();
        let k = (j != self.identity()).then_some(j);
        self.two_structure_mod(k)
    }
}
