//! Per-curve descent image: statuses for every candidate square class.

use super::{
    local_obstruction, real_obstruction, search_homogeneous, Curve, DescentError,
    HomogeneousSpace, Membership, ModuliPolicy, Obstruction, SolvabilityStatus, SquareClass,
    Witness,
};
use crate::arith;
use std::collections::{BTreeMap, BTreeSet};

/// Statuses of all candidate classes of one curve, with the subset that is
/// guaranteed by construction (images of O, (0,0) and the rational
/// 2-torsion points).
#[derive(Debug, Clone)]
pub struct DescentImage {
    curve: Curve,
    classes: BTreeMap<SquareClass, SolvabilityStatus>,
    guaranteed: BTreeSet<SquareClass>,
    search_bound: u64,
}

impl DescentImage {
    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn classes(&self) -> impl Iterator<Item = (&SquareClass, &SolvabilityStatus)> {
        self.classes.iter()
    }

    pub fn status(&self, class: &SquareClass) -> Option<&SolvabilityStatus> {
        self.classes.get(class)
    }

    /// Classes guaranteed in the image without any search.
    pub fn guaranteed(&self) -> &BTreeSet<SquareClass> {
        &self.guaranteed
    }

    pub fn search_bound(&self) -> u64 {
        self.search_bound
    }

    /// Classes proven to lie in the image.
    pub fn proven(&self) -> Vec<SquareClass> {
        self.classes
            .iter()
            .filter(|(_, s)| s.is_member())
            .map(|(c, _)| *c)
            .collect()
    }

    pub fn proven_count(&self) -> usize {
        self.classes.values().filter(|s| s.is_member()).count()
    }

    /// Candidate classes not certified out of the image.
    pub fn not_obstructed_count(&self) -> usize {
        self.classes.values().filter(|s| !s.is_obstructed()).count()
    }

    pub fn undecided(&self) -> Vec<SquareClass> {
        self.classes
            .iter()
            .filter(|(_, s)| matches!(s, SolvabilityStatus::Undecided { .. }))
            .map(|(c, _)| *c)
            .collect()
    }

    /// Record an externally constructed witness (e.g. from the quartic-form
    /// machinery) and re-close the proven set.
    ///
    /// The witness is re-verified against the space, the space against the
    /// curve. Returns `Ok(true)` when the class was newly settled. A witness
    /// for an obstructed class is a hard inconsistency.
    pub fn augment_with_witness(
        &mut self,
        space: &HomogeneousSpace,
        witness: Witness,
    ) -> Result<bool, DescentError> {
        if space.a != self.curve.a() || space.curve_b() != self.curve.b() {
            return Err(DescentError::Inconsistency(format!(
                "space {space} does not belong to {}",
                self.curve
            )));
        }
        if !witness.verify(space) {
            return Err(DescentError::InvalidWitness(format!(
                "augmented witness fails {space}"
            )));
        }
        let class = SquareClass::new(space.b1)?;
        match self.classes.get(&class) {
            Some(s) if s.is_member() => return Ok(false),
            Some(s) if s.is_obstructed() => {
                return Err(DescentError::Inconsistency(format!(
                    "witness found for obstructed class {class} of {}",
                    self.curve
                )));
            }
            _ => {}
        }
        self.classes.insert(
            class,
            SolvabilityStatus::ProvenSolvable {
                proof: Membership::Witness {
                    space: *space,
                    witness,
                },
            },
        );
        let candidates: Vec<SquareClass> = self.classes.keys().copied().collect();
        close_under_group_law(&candidates, &mut self.classes)?;
        if !self.proven_count().is_power_of_two() {
            return Err(DescentError::Inconsistency(format!(
                "proven subset of {} is not a subgroup after augmentation",
                self.curve
            )));
        }
        Ok(true)
    }
}

/// Candidate square classes of a curve: squarefree divisors of `b` (both
/// signs) whose homogeneous space is solvable over the reals.
///
/// Always contains the class of 1 and the class of `b`.
///
/// ```
/// use congruent::descent::{candidate_classes, Curve};
/// let reps = |c: &Curve| -> Vec<i128> {
///     candidate_classes(c).unwrap().iter().map(|d| d.representative()).collect()
/// };
/// assert_eq!(reps(&Curve::new(0, -25).unwrap()), vec![1, -1, 5, -5]);
/// assert_eq!(reps(&Curve::new(0, 4 * 41 * 41).unwrap()), vec![1, 2, 41, 82]);
/// ```
pub fn candidate_classes(curve: &Curve) -> Result<Vec<SquareClass>, DescentError> {
    let primes = arith::prime_factors(curve.b())?;
    let mut divisors: Vec<i128> = vec![1];
    for p in primes {
        let mut next = Vec::with_capacity(divisors.len() * 2);
        for d in &divisors {
            next.push(*d);
            next.push(d * p);
        }
        divisors = next;
    }
    let mut classes = Vec::new();
    for d in divisors {
        for signed in [d, -d] {
            let class = SquareClass::new(signed)?;
            let space = HomogeneousSpace::for_class(curve, class)?;
            if real_obstruction(&space).is_none() {
                classes.push(class);
            }
        }
    }
    classes.sort();
    Ok(classes)
}

/// Compute the descent image of a curve.
///
/// Class 1 and the class of `b` are members by definition (images of O and
/// (0,0)); classes of rational 2-torsion points `(x, 0)` with `x ≠ 0` are
/// members as images of actual points. Everything else goes through the
/// residue sieve and then the bounded witness search, and the proven set is
/// closed under multiplication in `Q*/Q*²` (with derivations recorded).
/// A class that is simultaneously proven and obstructed is a hard error.
pub fn compute_image(
    curve: &Curve,
    bound: u64,
    policy: &ModuliPolicy,
) -> Result<DescentImage, DescentError> {
    let candidates = candidate_classes(curve)?;
    let mut classes: BTreeMap<SquareClass, SolvabilityStatus> = BTreeMap::new();

    let mut mark = |class: SquareClass, proof: Membership| -> Result<(), DescentError> {
        if !candidates.contains(&class) {
            return Err(DescentError::Inconsistency(format!(
                "guaranteed class {class} missing from the candidate set"
            )));
        }
        classes
            .entry(class)
            .or_insert(SolvabilityStatus::ProvenSolvable { proof });
        Ok(())
    };
    mark(SquareClass::new(1)?, Membership::Identity)?;
    mark(SquareClass::of(curve.b())?, Membership::DistinguishedPoint)?;
    for x in curve.two_torsion_x() {
        if x != 0 {
            mark(SquareClass::of(x)?, Membership::TorsionPoint { x })?;
        }
    }
    let guaranteed: BTreeSet<SquareClass> = classes.keys().copied().collect();

    // Residue sieve.
    for class in &candidates {
        if classes.contains_key(class) {
            continue;
        }
        let space = HomogeneousSpace::for_class(curve, *class)?;
        let status = local_obstruction(&space, &policy.moduli_for(&space));
        if status.is_obstructed() {
            classes.insert(*class, status);
        }
    }
    close_under_group_law(&candidates, &mut classes)?;

    // Witness search for whatever the sieve and closure left open, closing
    // after each hit so implied memberships skip their own scans.
    for class in &candidates {
        if classes.contains_key(class) {
            continue;
        }
        let space = HomogeneousSpace::for_class(curve, *class)?;
        let status = search_homogeneous(&space, bound);
        let found = status.is_member();
        classes.insert(*class, status);
        if found {
            close_under_group_law(&candidates, &mut classes)?;
        }
    }

    let image = DescentImage {
        curve: *curve,
        classes,
        guaranteed,
        search_bound: bound,
    };
    if !image.proven_count().is_power_of_two() {
        return Err(DescentError::Inconsistency(format!(
            "proven subset of {curve} is not a subgroup ({} elements)",
            image.proven_count()
        )));
    }
    Ok(image)
}

/// Fixpoint closure: products of members are members, and a member times an
/// obstructed class is obstructed (the image is a subgroup of `Q*/Q*²`).
/// Conflicts with already-recorded statuses are hard errors.
fn close_under_group_law(
    candidates: &[SquareClass],
    classes: &mut BTreeMap<SquareClass, SolvabilityStatus>,
) -> Result<(), DescentError> {
    loop {
        let members: Vec<SquareClass> = classes
            .iter()
            .filter(|(_, s)| s.is_member())
            .map(|(c, _)| *c)
            .collect();
        let obstructed: Vec<SquareClass> = classes
            .iter()
            .filter(|(_, s)| s.is_obstructed())
            .map(|(c, _)| *c)
            .collect();
        let mut changed = false;

        for (i, left) in members.iter().enumerate() {
            for right in &members[i..] {
                let product = left.mul(right)?;
                if product == *left || product == *right {
                    continue;
                }
                if !candidates.contains(&product) {
                    return Err(DescentError::Inconsistency(format!(
                        "product {product} of members {left}, {right} is not a candidate class"
                    )));
                }
                match classes.get(&product) {
                    Some(s) if s.is_obstructed() => {
                        return Err(DescentError::Inconsistency(format!(
                            "image group law violated: {left} × {right} = {product} is obstructed"
                        )));
                    }
                    Some(s) if s.is_member() => {}
                    _ => {
                        // Absent or still undecided: closure settles it.
                        classes.insert(
                            product,
                            SolvabilityStatus::ProvenSolvable {
                                proof: Membership::Closure {
                                    left: *left,
                                    right: *right,
                                },
                            },
                        );
                        changed = true;
                    }
                }
            }
        }

        for member in &members {
            for out in &obstructed {
                let product = member.mul(out)?;
                if !candidates.contains(&product) {
                    continue;
                }
                match classes.get(&product) {
                    Some(s) if s.is_member() => {
                        return Err(DescentError::Inconsistency(format!(
                            "members {member} and {product} force obstructed class {out} into the image"
                        )));
                    }
                    Some(s) if s.is_obstructed() => {}
                    _ => {
                        classes.insert(
                            product,
                            SolvabilityStatus::LocallyObstructed {
                                obstruction: Obstruction::Derived {
                                    member: *member,
                                    obstructed: *out,
                                },
                            },
                        );
                        changed = true;
                    }
                }
            }
        }

        if !changed {
            return Ok(());
        }
    }
}
