//! Finite groups stored as validated Cayley tables, with the subgroup
//! machinery needed to evaluate factor-side conditions: power subgroups,
//! normal closures, normal-subgroup lattices and quotients.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Axiom, Error, Result};

/// Default cap on the order of a group whose normal-subgroup lattice may be
/// enumerated.
pub const DEFAULT_ENUMERATION_BOUND: usize = 2048;

/// A finite group on the indices `0..order`.
///
/// Groups from tables are validated on construction and immutable
/// afterwards. Cyclic groups multiply arithmetically, so large orders cost
/// no `order²` table.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    names: Vec<String>,
    lookup: HashMap<String, usize>,
    identity: usize,
    storage: Storage,
    inverses: Vec<u32>,
    abelian: bool,
}

#[derive(Clone, PartialEq, Eq)]
enum Storage {
    /// `table[x * order + y]` is `x·y`.
    Table(Vec<u32>),
    /// `x·y = (x + y) mod order`.
    Cyclic,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order())
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.identity == other.identity
            && self.storage == other.storage
            && self.names == other.names
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from display names and a full table, checking closure,
    /// identity, inverses and associativity.
    pub fn from_table(
        name: impl Into<String>,
        names: Vec<String>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let k = names.len();
        if k == 0 {
            return Err(Error::InvalidFamily(
                "a group needs at least one element".into(),
            ));
        }
        let mut lookup = HashMap::with_capacity(k);
        for (i, n) in names.iter().enumerate() {
            if lookup.insert(n.clone(), i).is_some() {
                return Err(Error::BadReference(format!("duplicate element name `{n}`")));
            }
        }
        if table.len() != k {
            return Err(not_a_group(
                Axiom::Closure,
                (0, 0, 0),
                format!("table has {} rows, expected {k}", table.len()),
            ));
        }
        let mut flat = Vec::with_capacity(k * k);
        for (x, row) in table.iter().enumerate() {
            if row.len() != k {
                return Err(not_a_group(
                    Axiom::Closure,
                    (x, x, x),
                    format!("row {x} has {} entries, expected {k}", row.len()),
                ));
            }
            for (y, &v) in row.iter().enumerate() {
                if v >= k {
                    return Err(not_a_group(
                        Axiom::Closure,
                        (x, y, y),
                        format!("entry {x}·{y} = {v} is out of range"),
                    ));
                }
                flat.push(v as u32);
            }
        }
        let mut group = FiniteGroup {
            name: name.into(),
            names,
            lookup,
            identity: 0,
            storage: Storage::Table(flat),
            inverses: Vec::new(),
            abelian: false,
        };
        group.identity = group.find_identity()?;
        group.inverses = group.find_inverses()?;
        group.check_associative()?;
        let k = group.order();
        group.abelian = (0..k).all(|x| (x + 1..k).all(|y| group.mul(x, y) == group.mul(y, x)));
        Ok(group)
    }

    fn from_fn(
        name: impl Into<String>,
        names: Vec<String>,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let k = names.len();
        let table = (0..k)
            .map(|x| (0..k).map(|y| mul(x, y)).collect())
            .collect();
        Self::from_table(name, names, table)
    }

    fn find_identity(&self) -> Result<usize> {
        let k = self.order();
        (0..k)
            .find(|&e| (0..k).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
            .ok_or_else(|| {
                not_a_group(
                    Axiom::Identity,
                    (0, 0, 0),
                    "no two-sided identity element".into(),
                )
            })
    }

    fn find_inverses(&self) -> Result<Vec<u32>> {
        let k = self.order();
        let e = self.identity;
        let mut inverses = Vec::with_capacity(k);
        for x in 0..k {
            let mut found = None;
            for y in 0..k {
                if self.mul(x, y) == e {
                    if found.is_some() {
                        return Err(not_a_group(
                            Axiom::Inverse,
                            (x, y, e),
                            format!("`{}` has more than one right inverse", self.names[x]),
                        ));
                    }
                    found = Some(y);
                }
            }
            match found {
                Some(y) if self.mul(y, x) == e => inverses.push(y as u32),
                Some(y) => {
                    return Err(not_a_group(
                        Axiom::Inverse,
                        (x, y, e),
                        format!("right inverse of `{}` is not a left inverse", self.names[x]),
                    ))
                }
                None => {
                    return Err(not_a_group(
                        Axiom::Inverse,
                        (x, x, e),
                        format!("`{}` has no inverse", self.names[x]),
                    ))
                }
            }
        }
        Ok(inverses)
    }

    /// Light's associativity test: the elements `a` with `(x·a)·y = x·(a·y)`
    /// for all `x, y` form a submagma, so checking a generating set settles
    /// associativity of the whole table in `O(k² · |gens|)`.
    fn check_associative(&self) -> Result<()> {
        let k = self.order();
        for a in self.magma_generators() {
            for x in 0..k {
                let xa = self.mul(x, a);
                for y in 0..k {
                    if self.mul(xa, y) != self.mul(x, self.mul(a, y)) {
                        return Err(not_a_group(
                            Axiom::Associativity,
                            (x, a, y),
                            format!(
                                "({}·{})·{} ≠ {}·({}·{})",
                                self.names[x],
                                self.names[a],
                                self.names[y],
                                self.names[x],
                                self.names[a],
                                self.names[y]
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Greedy generating set under left-to-right products, valid before
    /// associativity is known.
    fn magma_generators(&self) -> Vec<usize> {
        let k = self.order();
        let mut covered = vec![false; k];
        covered[self.identity] = true;
        let mut gens = Vec::new();
        for x in 0..k {
            if covered[x] {
                continue;
            }
            gens.push(x);
            let mut queue: Vec<usize> = (0..k).filter(|&y| covered[y]).collect();
            while let Some(y) = queue.pop() {
                for &g in &gens {
                    let z = self.mul(y, g);
                    if !covered[z] {
                        covered[z] = true;
                        queue.push(z);
                    }
                }
            }
        }
        gens
    }

    /// The cyclic group of order `r` written multiplicatively with generator
    /// `a`: elements `e, a, a^2, …`.
    pub fn cyclic(r: usize) -> Result<Self> {
        Self::cyclic_named(r, "a")
    }

    pub fn cyclic_named(r: usize, generator: &str) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidFamily("cyclic group of order 0".into()));
        }
        let names: Vec<String> = (0..r).map(|i| power_name(generator, i)).collect();
        let lookup = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Ok(FiniteGroup {
            name: format!("Z{r}"),
            names,
            lookup,
            identity: 0,
            storage: Storage::Cyclic,
            inverses: (0..r).map(|x| ((r - x) % r) as u32).collect(),
            abelian: true,
        })
    }

    /// Dihedral group of order `2r`: rotations `r^i` at indices `0..r`,
    /// reflections `r^i s` at `r..2r`.
    pub fn dihedral(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidFamily(
                "dihedral group with 0 rotations".into(),
            ));
        }
        let mut names: Vec<String> = (0..r).map(|i| power_name("r", i)).collect();
        names.extend((0..r).map(|i| match i {
            0 => "s".to_string(),
            _ => format!("{}s", power_name("r", i)),
        }));
        Self::from_fn(format!("D{r}"), names, |x, y| {
            let (i, a) = (x % r, x / r);
            let (j, b) = (y % r, y / r);
            let rot = if a == 0 { (i + j) % r } else { (i + r - j) % r };
            rot + r * ((a + b) % 2)
        })
    }

    /// Symmetric group on `k ≤ 5` points. Elements are permutations in
    /// lexicographic order, named in 1-based cycle notation, with
    /// `(x·y)(i) = x(y(i))`.
    pub fn symmetric(k: usize) -> Result<Self> {
        if !(1..=5).contains(&k) {
            return Err(Error::InvalidFamily(format!(
                "symmetric groups are supported for degree 1..=5, got {k}"
            )));
        }
        let perms = permutations(k);
        let index: HashMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let names = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::from_fn(format!("S{k}"), names, |x, y| {
            let composed: Vec<usize> = (0..k).map(|i| perms[x][perms[y][i]]).collect();
            index[&composed]
        })
    }

    /// Quaternion group `Q8` with elements `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Result<Self> {
        // unit·unit = (sign flip, unit) over units 1, i, j, k
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::from_fn("Q8", names, |x, y| {
            let (ux, sx) = (x / 2, x % 2);
            let (uy, sy) = (y / 2, y % 2);
            let (flip, u) = UNIT[ux][uy];
            2 * u + (sx + sy + flip) % 2
        })
    }

    /// Direct product `A × B`; the pair `(a, b)` has index `a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let kb = b.order();
        let names = (0..a.order())
            .flat_map(|x| (0..kb).map(move |y| (x, y)))
            .map(|(x, y)| format!("({},{})", a.names[x], b.names[y]))
            .collect();
        Self::from_fn(format!("{}x{}", a.name, b.name), names, |x, y| {
            a.mul(x / kb, y / kb) * kb + b.mul(x % kb, y % kb)
        })
    }

    pub fn trivial() -> Self {
        Self::from_table("1", vec!["e".into()], vec![vec![0]]).expect("trivial group")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn element_name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    /// Resolves a display name, falling back to a decimal element index.
    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.lookup
            .get(name)
            .copied()
            .or_else(|| name.parse::<usize>().ok().filter(|&i| i < self.order()))
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.storage {
            Storage::Table(t) => t[x * self.order() + y] as usize,
            Storage::Cyclic => {
                let z = x + y;
                if z >= self.order() {
                    z - self.order()
                } else {
                    z
                }
            }
        }
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x] as usize
    }

    /// `g·x·g⁻¹`
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `x^m` by repeated squaring.
    pub fn pow(&self, x: usize, m: u64) -> usize {
        let mut result = self.identity;
        let mut base = x;
        let mut m = m;
        while m > 0 {
            if m & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            m >>= 1;
        }
        result
    }

    pub fn pow_signed(&self, x: usize, m: i64) -> usize {
        let p = self.pow(x, m.unsigned_abs());
        if m < 0 {
            self.inv(p)
        } else {
            p
        }
    }

    /// Least `m ≥ 1` with `x^m = e`.
    pub fn element_order(&self, x: usize) -> usize {
        let mut m = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            m += 1;
        }
        m
    }

    /// Elements of order exactly two, ascending.
    pub fn involutions(&self) -> Vec<usize> {
        self.elements()
            .filter(|&x| x != self.identity && self.mul(x, x) == self.identity)
            .collect()
    }

    pub fn is_involution(&self, x: usize) -> bool {
        x != self.identity && self.mul(x, x) == self.identity
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn is_cyclic(&self) -> bool {
        let k = self.order();
        self.elements().any(|x| self.element_order(x) == k)
    }

    pub fn is_central(&self, x: usize) -> bool {
        self.elements().all(|g| self.mul(g, x) == self.mul(x, g))
    }

    /// True iff `x^n = e` for every element, i.e. every order divides `n`.
    pub fn exponent_divides(&self, n: u64) -> bool {
        self.elements().all(|x| self.pow(x, n) == self.identity)
    }

    /// Conjugacy classes, each sorted, ordered by least member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let k = self.order();
        let mut seen = vec![false; k];
        let mut classes = Vec::new();
        for x in 0..k {
            if seen[x] {
                continue;
            }
            let class: BTreeSet<usize> = self.elements().map(|g| self.conjugate(x, g)).collect();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Subgroup generated by `gens` (the identity alone when empty), with
    /// normality decided by an explicit conjugation test.
    pub fn subgroup_generated(&self, gens: &[usize]) -> SubgroupSet {
        let mask = self.closure_mask(gens);
        let is_normal = self.mask_is_normal(&mask);
        SubgroupSet::from_mask(mask, is_normal)
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[usize]) -> SubgroupSet {
        let conjugates: BTreeSet<usize> = seeds
            .iter()
            .flat_map(|&s| self.elements().map(move |g| (s, g)))
            .map(|(s, g)| self.conjugate(s, g))
            .collect();
        let gens: Vec<usize> = conjugates.into_iter().collect();
        let mask = self.closure_mask(&gens);
        debug_assert!(self.mask_is_normal(&mask));
        SubgroupSet::from_mask(mask, true)
    }

    /// `Gⁿ`: the subgroup generated by all `n`-th powers. It is generated by
    /// a conjugation-closed set, and the normality flag is verified anyway.
    pub fn power_subgroup(&self, n: u64) -> SubgroupSet {
        let powers: BTreeSet<usize> = self.elements().map(|x| self.pow(x, n)).collect();
        let gens: Vec<usize> = powers.into_iter().collect();
        let mask = self.closure_mask(&gens);
        let is_normal = self.mask_is_normal(&mask);
        assert!(is_normal, "power subgroup failed the conjugation test");
        SubgroupSet::from_mask(mask, is_normal)
    }

    /// Validates a user-supplied member set as a subgroup and decides
    /// normality.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Result<SubgroupSet> {
        let k = self.order();
        let mut mask = vec![false; k];
        for &m in members {
            if m >= k {
                return Err(Error::BadReference(format!(
                    "element index {m} out of range for {}",
                    self.name
                )));
            }
            mask[m] = true;
        }
        if !mask[self.identity] {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        let list: Vec<usize> = (0..k).filter(|&x| mask[x]).collect();
        for &x in &list {
            if !mask[self.inv(x)] {
                return Err(Error::NotASubgroup(format!(
                    "inverse of `{}` missing",
                    self.names[x]
                )));
            }
            for &y in &list {
                if !mask[self.mul(x, y)] {
                    return Err(Error::NotASubgroup(format!(
                        "product `{}`·`{}` missing",
                        self.names[x], self.names[y]
                    )));
                }
            }
        }
        let is_normal = self.mask_is_normal(&mask);
        Ok(SubgroupSet::from_mask(mask, is_normal))
    }

    /// Checks that `subgroup` is a subgroup of this group with a truthful
    /// normality flag. Used on values that crossed an API boundary.
    pub fn check_subgroup(&self, subgroup: &SubgroupSet) -> Result<()> {
        if subgroup.parent_order() != self.order() {
            return Err(Error::BadReference(format!(
                "subgroup belongs to a group of order {}, not {}",
                subgroup.parent_order(),
                self.order()
            )));
        }
        let checked = self.subgroup_from_members(subgroup.members())?;
        if checked.is_normal != subgroup.is_normal {
            return Err(Error::Invariant("subgroup normality flag is stale".into()));
        }
        Ok(())
    }

    /// All normal subgroups, ordered by size and then by member list.
    ///
    /// Every normal subgroup is the join of the normal closures of the
    /// conjugacy classes it contains, so the lattice is the join-closure of
    /// those class closures.
    pub fn normal_subgroups(&self, bound: usize) -> Result<Vec<SubgroupSet>> {
        if self.order() > bound {
            return Err(Error::BoundExceeded(format!(
                "normal-subgroup enumeration of {} (order {}) exceeds the bound {bound}",
                self.name,
                self.order()
            )));
        }
        let mut atoms: Vec<Vec<bool>> = Vec::new();
        let mut atom_seen = HashSet::new();
        for class in self.conjugacy_classes() {
            if class == [self.identity] {
                continue;
            }
            let mask = self.closure_mask(&class);
            if atom_seen.insert(mask.clone()) {
                atoms.push(mask);
            }
        }

        let trivial = self.closure_mask(&[]);
        let mut seen: HashSet<Vec<bool>> = HashSet::from([trivial.clone()]);
        let mut found = vec![trivial];
        let mut cursor = 0;
        while cursor < found.len() {
            let current = found[cursor].clone();
            cursor += 1;
            for atom in &atoms {
                if atom.iter().zip(&current).all(|(&a, &c)| !a || c) {
                    continue;
                }
                let join = self.join_normal(&current, atom);
                if seen.insert(join.clone()) {
                    found.push(join);
                }
            }
        }

        let mut subgroups: Vec<SubgroupSet> = found
            .into_iter()
            .map(|mask| SubgroupSet::from_mask(mask, true))
            .collect();
        subgroups.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.members().cmp(b.members()))
        });
        Ok(subgroups)
    }

    /// Product `AB` of two normal subgroups.
    fn join_normal(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let k = self.order();
        let mut mask = vec![false; k];
        let left: Vec<usize> = (0..k).filter(|&x| a[x]).collect();
        let right: Vec<usize> = (0..k).filter(|&x| b[x]).collect();
        for &x in &left {
            for &y in &right {
                mask[self.mul(x, y)] = true;
            }
        }
        mask
    }

    /// Quotient by a normal subgroup. Each coset is represented by its least
    /// element index; quotient elements are ordered by representative and
    /// named after it. Returns the group and the projection.
    pub fn quotient(&self, normal: &SubgroupSet) -> Result<(FiniteGroup, Vec<usize>)> {
        self.check_subgroup(normal)?;
        if !normal.is_normal() {
            return Err(Error::NotNormal(format!(
                "subgroup of order {} in {}",
                normal.order(),
                self.name
            )));
        }
        let k = self.order();
        let mut projection = vec![usize::MAX; k];
        let mut reps = Vec::new();
        for x in 0..k {
            if projection[x] != usize::MAX {
                continue;
            }
            let coset = reps.len();
            reps.push(x);
            for &m in normal.members() {
                projection[self.mul(x, m)] = coset;
            }
        }
        let names = reps.iter().map(|&r| self.names[r].clone()).collect();
        let table = reps
            .iter()
            .map(|&x| reps.iter().map(|&y| projection[self.mul(x, y)]).collect())
            .collect();
        let quotient =
            FiniteGroup::from_table(format!("{}/N{}", self.name, normal.order()), names, table)?;
        for x in 0..k {
            for y in 0..k {
                if projection[self.mul(x, y)] != quotient.mul(projection[x], projection[y]) {
                    return Err(Error::Invariant(format!(
                        "quotient projection of {} is not a homomorphism at ({x}, {y})",
                        self.name
                    )));
                }
            }
        }
        Ok((quotient, projection))
    }

    /// A deterministic small generating set of `subgroup`: greedily adds the
    /// least member not yet generated.
    pub fn generators_of(&self, subgroup: &SubgroupSet) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut mask = self.closure_mask(&[]);
        for &x in subgroup.members() {
            if !mask[x] {
                gens.push(x);
                mask = self.closure_mask(&gens);
            }
        }
        gens
    }

    /// Adds generators one at a time, skipping those already inside, so at
    /// most `log₂ k` generators are ever used.
    fn closure_mask(&self, gens: &[usize]) -> Vec<bool> {
        let k = self.order();
        let mut mask = vec![false; k];
        mask[self.identity] = true;
        let mut members = vec![self.identity];
        let mut used: Vec<usize> = Vec::new();
        for &g in gens {
            if mask[g] {
                continue;
            }
            used.push(g);
            let mut queue = members.clone();
            while let Some(x) = queue.pop() {
                for &h in &used {
                    let y = self.mul(x, h);
                    if !mask[y] {
                        mask[y] = true;
                        members.push(y);
                        queue.push(y);
                    }
                }
            }
        }
        mask
    }

    fn mask_is_normal(&self, mask: &[bool]) -> bool {
        if self.abelian {
            return true;
        }
        let members: Vec<usize> = (0..self.order()).filter(|&x| mask[x]).collect();
        self.elements()
            .all(|g| members.iter().all(|&m| mask[self.conjugate(m, g)]))
    }
}

fn not_a_group(axiom: Axiom, witness: (usize, usize, usize), detail: String) -> Error {
    Error::NotAGroup {
        axiom,
        witness,
        detail,
    }
}

fn power_name(generator: &str, i: usize) -> String {
    match i {
        0 => "e".to_string(),
        1 => generator.to_string(),
        _ => format!("{generator}^{i}"),
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                extend(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = perm[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// A subgroup of a [`FiniteGroup`], stored as a membership mask plus the
/// sorted member list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupSet {
    mask: Vec<bool>,
    members: Vec<usize>,
    is_normal: bool,
}

impl SubgroupSet {
    fn from_mask(mask: Vec<bool>, is_normal: bool) -> Self {
        let members = (0..mask.len()).filter(|&x| mask[x]).collect();
        SubgroupSet {
            mask,
            members,
            is_normal,
        }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn parent_order(&self) -> usize {
        self.mask.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    pub fn is_normal(&self) -> bool {
        self.is_normal
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.mask.len()
    }

    pub fn is_subset_of(&self, other: &SubgroupSet) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    fn v4() -> FiniteGroup {
        FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2).unwrap(),
            &FiniteGroup::cyclic(2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn cyclic_table_is_addition() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(z3.mul(i, j), (i + j) % 3);
            }
        }
        assert_eq!(FiniteGroup::cyclic(1995).unwrap().order(), 1995);
    }

    #[test]
    fn idempotent_non_identity_has_no_inverse() {
        let names = vec!["e".to_string(), "a".to_string()];
        let err = FiniteGroup::from_table("bad", names, vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        match err {
            Error::NotAGroup { axiom, witness, .. } => {
                assert_eq!(axiom, Axiom::Inverse);
                assert_eq!(witness.0, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_associative_loop_is_rejected() {
        // Smallest non-associative loop (order 5) with unique inverses.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let names = (0..5).map(|i| i.to_string()).collect();
        let err = FiniteGroup::from_table("loop", names, t).unwrap_err();
        assert!(matches!(
            err,
            Error::NotAGroup {
                axiom: Axiom::Associativity,
                ..
            }
        ));
    }

    #[test]
    fn out_of_range_entry_fails_closure() {
        let names = vec!["e".to_string(), "a".to_string()];
        let err = FiniteGroup::from_table("bad", names, vec![vec![0, 1], vec![1, 2]]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotAGroup {
                axiom: Axiom::Closure,
                ..
            }
        ));
    }

    #[test]
    fn missing_identity() {
        let names = vec!["x".to_string(), "y".to_string()];
        let err = FiniteGroup::from_table("bad", names, vec![vec![1, 0], vec![0, 0]]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotAGroup {
                axiom: Axiom::Identity,
                ..
            }
        ));
    }

    #[test]
    fn element_orders() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(z6.element_order(2), 3);
        assert_eq!(z6.element_order(3), 2);
        assert_eq!(z6.element_order(z6.identity()), 1);
        let s4 = FiniteGroup::symmetric(4).unwrap();
        assert_eq!(s4.element_order(s4.identity()), 1);
    }

    #[test]
    fn involution_lists() {
        assert!(FiniteGroup::cyclic(3).unwrap().involutions().is_empty());
        assert_eq!(FiniteGroup::cyclic(2).unwrap().involutions(), vec![1]);
        assert_eq!(v4().involutions().len(), 3);
        assert_eq!(FiniteGroup::symmetric(3).unwrap().involutions().len(), 3);
        assert_eq!(FiniteGroup::quaternion().unwrap().involutions(), vec![1]);
    }

    #[test]
    fn pow_matches_repeated_product() {
        for g in [
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::dihedral(5).unwrap(),
            FiniteGroup::quaternion().unwrap(),
            FiniteGroup::cyclic(12).unwrap(),
        ] {
            for x in g.elements() {
                let mut acc = g.identity();
                for n in 0..=20u64 {
                    assert_eq!(g.pow(x, n), acc, "{} x={x} n={n}", g.name());
                    acc = g.mul(acc, x);
                }
            }
        }
    }

    #[test]
    fn power_subgroup_examples() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        assert!(z3.power_subgroup(665).is_whole());
        let z5 = FiniteGroup::cyclic(5).unwrap();
        assert!(z5.power_subgroup(665).is_trivial());

        // Brute force: all 665th powers of Z1995, then close under products.
        let z = FiniteGroup::cyclic(1995).unwrap();
        let mut set: BTreeSet<usize> = (0..1995).map(|x| (x * 665) % 1995).collect();
        loop {
            let next: BTreeSet<usize> = set
                .iter()
                .flat_map(|&a| set.iter().map(move |&b| (a + b) % 1995))
                .chain(set.iter().copied())
                .collect();
            if next == set {
                break;
            }
            set = next;
        }
        let p = z.power_subgroup(665);
        assert_eq!(p.members(), set.into_iter().collect::<Vec<_>>().as_slice());
        assert_eq!(p.order(), 3);
        assert!(p.is_normal());
    }

    #[test]
    fn cyclic_power_subgroup_matches_gcd() {
        for r in 1..60 {
            let g = FiniteGroup::cyclic(r).unwrap();
            for n in [1u64, 2, 3, 6, 665, 1995] {
                assert_eq!(g.power_subgroup(n).order(), r / gcd(n as usize, r));
            }
        }
    }

    #[test]
    fn generated_subgroups() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(z6.subgroup_generated(&[2]).members(), &[0, 2, 4]);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let t = s3.involutions()[0];
        let h = s3.subgroup_generated(&[t]);
        assert_eq!(h.order(), 2);
        assert!(!h.is_normal());
        assert!(s3.subgroup_generated(&[]).is_trivial());
    }

    #[test]
    fn normal_closures() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let t = s3.involutions()[0];
        assert!(s3.normal_closure(&[t]).is_whole());
        let c = s3.elements().find(|&x| s3.element_order(x) == 3).unwrap();
        let a3 = s3.normal_closure(&[c]);
        assert_eq!(a3.order(), 3);
        assert!(a3.is_normal());
        assert!(s3.normal_closure(&[]).is_trivial());
    }

    #[test]
    fn normal_subgroup_counts() {
        let cases = [
            (FiniteGroup::symmetric(3).unwrap(), 3),
            (FiniteGroup::cyclic(12).unwrap(), 6),
            (FiniteGroup::cyclic(13).unwrap(), 2),
            (FiniteGroup::dihedral(4).unwrap(), 6),
            (FiniteGroup::quaternion().unwrap(), 6),
            (FiniteGroup::symmetric(4).unwrap(), 4),
            (FiniteGroup::symmetric(5).unwrap(), 3),
            (FiniteGroup::dihedral(12).unwrap(), 9),
            (FiniteGroup::trivial(), 1),
        ];
        for (g, count) in cases {
            let normals = g.normal_subgroups(DEFAULT_ENUMERATION_BOUND).unwrap();
            assert_eq!(normals.len(), count, "{}", g.name());
            assert!(normals.first().unwrap().is_trivial());
            assert!(normals.last().unwrap().is_whole());
        }
    }

    #[test]
    fn s3_lattice_in_order() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let orders: Vec<usize> = s3
            .normal_subgroups(DEFAULT_ENUMERATION_BOUND)
            .unwrap()
            .iter()
            .map(|n| n.order())
            .collect();
        assert_eq!(orders, vec![1, 3, 6]);
    }

    #[test]
    fn enumeration_bound() {
        let g = FiniteGroup::cyclic(40).unwrap();
        assert!(matches!(
            g.normal_subgroups(39),
            Err(Error::BoundExceeded(_))
        ));
        let z1995 = FiniteGroup::cyclic(1995).unwrap();
        assert_eq!(
            z1995
                .normal_subgroups(DEFAULT_ENUMERATION_BOUND)
                .unwrap()
                .len(),
            16
        );
    }

    #[test]
    fn quotient_examples() {
        let z9 = FiniteGroup::cyclic(9).unwrap();
        let n = z9.subgroup_generated(&[3]);
        let (q, proj) = z9.quotient(&n).unwrap();
        assert_eq!(q.order(), 3);
        for (x, &image) in proj.iter().enumerate() {
            assert_eq!(image, x % 3);
        }

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let (q, proj) = s3.quotient(&s3.subgroup_generated(&[])).unwrap();
        assert_eq!(q.order(), 6);
        assert_eq!(proj, (0..6).collect::<Vec<_>>());
        let (q, _) = s3.quotient(&s3.normal_closure(&[1])).unwrap();
        assert_eq!(q.order(), 1);

        let t = s3.involutions()[0];
        let h = s3.subgroup_generated(&[t]);
        assert!(matches!(s3.quotient(&h), Err(Error::NotNormal(_))));
    }

    #[test]
    fn exponent_checks() {
        assert!(FiniteGroup::cyclic(5).unwrap().exponent_divides(665));
        assert!(!FiniteGroup::cyclic(1995).unwrap().exponent_divides(665));
        assert!(FiniteGroup::trivial().exponent_divides(7));
    }

    #[test]
    fn user_subgroup_validation() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert!(z6.subgroup_from_members(&[0, 3]).unwrap().is_normal());
        assert!(matches!(
            z6.subgroup_from_members(&[0, 1]),
            Err(Error::NotASubgroup(_))
        ));
        assert!(matches!(
            z6.subgroup_from_members(&[3]),
            Err(Error::NotASubgroup(_))
        ));
    }

    #[test]
    fn names_resolve() {
        let z9 = FiniteGroup::cyclic_named(9, "x").unwrap();
        assert_eq!(z9.element_by_name("x^3"), Some(3));
        assert_eq!(z9.element_by_name("e"), Some(0));
        assert_eq!(z9.element_by_name("4"), Some(4));
        assert_eq!(z9.element_by_name("y"), None);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let t = s3.element_by_name("(12)").unwrap();
        assert!(s3.is_involution(t));
    }
}
