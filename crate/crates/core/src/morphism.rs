//! Morphisms from permutation groups into permutation codomains, and the
//! cosets they name.
//!
//! A subgroup presented as the kernel of an evaluable morphism `m : G -> K`
//! has its cosets named by image values: `m^-1(v) ∩ G` is either empty or a
//! coset of `ker(m)`. Intersections of such cosets are again cosets of the
//! product morphism, so a running intersection never needs a witness element.
//!
//! Morphisms are evaluators, not tables over `G`. Product codomains are laid
//! out as a tagged disjoint union: the k-th factor acts on the k-th
//! consecutive block of points.

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::canon::ambient::{InitMorphism, ThetaMorphism};
use crate::error::{Error, Result};
use crate::group::{BigCard, GeneratorSet, StabilizerChain};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub enum PermMorphism {
    /// Sends everything to the identity of a codomain of the given size.
    Trivial { source: usize, codomain: usize },
    /// Generator-to-image association, extended multiplicatively.
    Table(Arc<TableMorphism>),
    /// Componentwise product over a tagged disjoint union of codomains.
    Product { source: usize, parts: Vec<PermMorphism> },
    Init(Arc<InitMorphism>),
    Theta(Arc<ThetaMorphism>),
}

impl PermMorphism {
    pub fn trivial(source: usize, codomain: usize) -> Self {
        PermMorphism::Trivial { source, codomain }
    }

    pub fn table(source: GeneratorSet, images: Vec<Permutation>) -> Result<Self> {
        Ok(PermMorphism::Table(Arc::new(TableMorphism::new(source, images)?)))
    }

    /// The identity map of `⟨s⟩`, as a table morphism.
    pub fn identity_on(s: &GeneratorSet) -> Self {
        PermMorphism::Table(Arc::new(
            TableMorphism::new(s.clone(), s.gens().to_vec()).expect("degrees agree"),
        ))
    }

    pub fn source_degree(&self) -> usize {
        match self {
            PermMorphism::Trivial { source, .. } => *source,
            PermMorphism::Table(t) => t.source.degree(),
            PermMorphism::Product { source, .. } => *source,
            PermMorphism::Init(m) => m.source_degree(),
            PermMorphism::Theta(m) => m.source_degree(),
        }
    }

    pub fn codomain_degree(&self) -> usize {
        match self {
            PermMorphism::Trivial { codomain, .. } => *codomain,
            PermMorphism::Table(t) => t.codomain,
            PermMorphism::Product { parts, .. } => parts.iter().map(|p| p.codomain_degree()).sum(),
            PermMorphism::Init(m) => m.codomain_degree(),
            PermMorphism::Theta(m) => m.codomain_degree(),
        }
    }

    /// Image of `sigma`. Only meaningful for `sigma` in the source group;
    /// table morphisms detect and reject elements outside it, other kinds
    /// reject what they can.
    pub fn evaluate(&self, sigma: &Permutation) -> Result<Permutation> {
        if sigma.degree() != self.source_degree() {
            return Err(Error::DomainMismatch {
                expected: self.source_degree(),
                found: sigma.degree(),
            });
        }
        match self {
            PermMorphism::Trivial { codomain, .. } => Ok(Permutation::identity(*codomain)),
            PermMorphism::Table(t) => t.evaluate(sigma),
            PermMorphism::Product { parts, .. } => {
                let images = parts.iter().map(|p| p.evaluate(sigma)).collect::<Result<Vec<_>>>()?;
                Ok(Permutation::concat(&images.iter().collect::<Vec<_>>()))
            }
            PermMorphism::Init(m) => m.evaluate(sigma),
            PermMorphism::Theta(m) => m.evaluate(sigma),
        }
    }

    /// Factors of a product, or the morphism itself.
    pub fn factors(&self) -> Vec<PermMorphism> {
        match self {
            PermMorphism::Product { parts, .. } => parts.clone(),
            other => vec![other.clone()],
        }
    }
}

/// A morphism given by the images of the generators of its source.
///
/// Evaluation sifts `(sigma, id)` through a chain of the graph group
/// `⟨(g, m(g))⟩` on the disjoint union of source and codomain. Base points are
/// taken in increasing order, so the source levels come first; after them the
/// residue is `(id, m(sigma)^-1)` exactly when `sigma` lies in the source.
#[derive(Debug)]
pub struct TableMorphism {
    source: GeneratorSet,
    images: Vec<Permutation>,
    codomain: usize,
    graph_chain: OnceLock<StabilizerChain>,
}

impl TableMorphism {
    pub fn new(source: GeneratorSet, images: Vec<Permutation>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::LengthMismatch {
                expected: source.len(),
                found: images.len(),
            });
        }
        let codomain = images.first().map_or(0, |p| p.degree());
        if let Some(p) = images.iter().find(|p| p.degree() != codomain) {
            return Err(Error::DomainMismatch {
                expected: codomain,
                found: p.degree(),
            });
        }
        Ok(TableMorphism {
            source,
            images,
            codomain,
            graph_chain: OnceLock::new(),
        })
    }

    /// A table with no generators still needs a codomain size.
    pub fn with_codomain(source: GeneratorSet, images: Vec<Permutation>, codomain: usize) -> Result<Self> {
        let mut t = TableMorphism::new(source, images)?;
        if t.images.is_empty() {
            t.codomain = codomain;
        } else if t.codomain != codomain {
            return Err(Error::DomainMismatch {
                expected: codomain,
                found: t.codomain,
            });
        }
        Ok(t)
    }

    pub fn source(&self) -> &GeneratorSet {
        &self.source
    }

    fn chain(&self) -> &StabilizerChain {
        self.graph_chain.get_or_init(|| {
            let gens = self
                .source
                .gens()
                .iter()
                .zip(&self.images)
                .map(|(g, h)| Permutation::concat(&[g, h]))
                .collect();
            let set = GeneratorSet::new(self.source.degree() + self.codomain, gens)
                .expect("concatenated degrees agree");
            StabilizerChain::build(&set)
        })
    }

    fn evaluate(&self, sigma: &Permutation) -> Result<Permutation> {
        let n = self.source.degree();
        let chain = self.chain();
        if !chain.base_points_below(n) {
            return Err(Error::Invariant(
                "generator images do not define a morphism (graph group has a nontrivial codomain kernel)".into(),
            ));
        }
        let lifted = Permutation::concat(&[sigma, &Permutation::identity(self.codomain)]);
        let (residue, _) = chain.strip_below(&lifted, n);
        let r = residue.images();
        if r[..n].iter().enumerate().any(|(x, &y)| x as u32 != y) {
            return Err(Error::EvaluationOutsideSource);
        }
        let tail: Vec<u32> = r[n..].iter().map(|&y| y - n as u32).collect();
        Ok(Permutation::from_raw(tail).inverse())
    }
}

/// `{evaluate(m, g) | g ∈ s}`; spans `im(m)` when `s` spans the source.
pub fn image_generators(m: &PermMorphism, s: &GeneratorSet) -> Result<GeneratorSet> {
    if m.source_degree() != s.degree() {
        return Err(Error::SourceMismatch(m.source_degree(), s.degree()));
    }
    let images = s.gens().iter().map(|g| m.evaluate(g)).collect::<Result<Vec<_>>>()?;
    let set = GeneratorSet::new(m.codomain_degree(), images)?;
    // images of commuting elements commute
    Ok(if s.abelian_known() || s.is_abelian() {
        set.assume_abelian()
    } else {
        set
    })
}

/// Stabilizer chain of `im(m)`.
pub fn image_chain(m: &PermMorphism, s: &GeneratorSet) -> Result<StabilizerChain> {
    Ok(StabilizerChain::build(&image_generators(m, s)?))
}

/// `|ker(m)| = |G| / |im(m)|`.
pub fn kernel_order(m: &PermMorphism, s: &GeneratorSet) -> Result<BigCard> {
    let g = StabilizerChain::build(s).order();
    let im = image_chain(m, s)?.order();
    if !(&g % &im).is_zero() {
        return Err(Error::NonDivisible);
    }
    Ok(g / im)
}

/// `tau ∈ ⟨s⟩` and `m(tau) = id`.
pub fn kernel_contains(m: &PermMorphism, s: &GeneratorSet, tau: &Permutation) -> Result<bool> {
    if tau.degree() != s.degree() {
        return Err(Error::DomainMismatch {
            expected: s.degree(),
            found: tau.degree(),
        });
    }
    if !StabilizerChain::build(s).contains(tau)? {
        return Ok(false);
    }
    Ok(m.evaluate(tau)?.is_identity())
}

/// Product morphism `m_1 ⊗ ... ⊗ m_k`; nested products are flattened.
pub fn tensor(ms: &[PermMorphism]) -> Result<PermMorphism> {
    let source = match ms.first() {
        Some(m) => m.source_degree(),
        None => return Err(Error::Invariant("empty tensor product".into())),
    };
    let mut parts = Vec::new();
    for m in ms {
        if m.source_degree() != source {
            return Err(Error::SourceMismatch(source, m.source_degree()));
        }
        parts.extend(m.factors());
    }
    Ok(PermMorphism::Product { source, parts })
}

/// Embeds a family of groups on a common per-tag domain of size `d` into
/// `Sym(tags × d)`: each generator of member `t` acts on layer `t` and fixes
/// every other layer. The span is the direct product of the members.
pub fn embed_family(d: usize, family: &[GeneratorSet]) -> Result<GeneratorSet> {
    let k = family.len();
    let mut gens = Vec::new();
    for (t, member) in family.iter().enumerate() {
        if member.degree() != d {
            return Err(Error::DomainMismatch {
                expected: d,
                found: member.degree(),
            });
        }
        for g in member.gens() {
            let mut images: Vec<u32> = (0..(k * d) as u32).collect();
            for x in 0..d {
                images[t * d + x] = (t * d + g.apply(x)) as u32;
            }
            gens.push(Permutation::from_raw(images));
        }
    }
    GeneratorSet::new(k * d, gens)
}

/// The set `m^-1(value) ∩ ⟨group⟩`.
#[derive(Clone, Debug)]
pub struct MorphismCoset {
    pub group: GeneratorSet,
    pub morphism: PermMorphism,
    pub value: Permutation,
}

impl MorphismCoset {
    pub fn new(group: GeneratorSet, morphism: PermMorphism, value: Permutation) -> Result<Self> {
        if morphism.source_degree() != group.degree() {
            return Err(Error::SourceMismatch(morphism.source_degree(), group.degree()));
        }
        if value.degree() != morphism.codomain_degree() {
            return Err(Error::DomainMismatch {
                expected: morphism.codomain_degree(),
                found: value.degree(),
            });
        }
        Ok(MorphismCoset { group, morphism, value })
    }

    /// The whole group, as the coset of the trivial morphism at the identity.
    pub fn full(group: GeneratorSet) -> Self {
        let n = group.degree();
        MorphismCoset {
            group,
            morphism: PermMorphism::trivial(n, 0),
            value: Permutation::identity(0),
        }
    }

    /// Whether `sigma` is an element of this coset.
    pub fn contains(&self, sigma: &Permutation) -> Result<bool> {
        if !StabilizerChain::build(&self.group).contains(sigma)? {
            return Ok(false);
        }
        Ok(self.morphism.evaluate(sigma)? == self.value)
    }
}

/// `c1 ∩ c2`, represented by the product morphism at the block value.
pub fn coset_intersect(c1: &MorphismCoset, c2: &MorphismCoset) -> Result<MorphismCoset> {
    if c1.group.degree() != c2.group.degree() {
        return Err(Error::SourceMismatch(c1.group.degree(), c2.group.degree()));
    }
    let morphism = tensor(&[c1.morphism.clone(), c2.morphism.clone()])?;
    let value = Permutation::concat(&[&c1.value, &c2.value]);
    MorphismCoset::new(c1.group.clone(), morphism, value)
}

/// Empty exactly when the value is not in the image.
pub fn coset_is_empty(c: &MorphismCoset) -> Result<bool> {
    Ok(!image_chain(&c.morphism, &c.group)?.contains(&c.value)?)
}

pub fn coset_size(c: &MorphismCoset) -> Result<BigCard> {
    if coset_is_empty(c)? {
        return Ok(BigUint::zero());
    }
    kernel_order(&c.morphism, &c.group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::closure_bruteforce;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    /// Z2 x Z2 as <(0 1), (2 3)> on 4 points.
    fn klein() -> GeneratorSet {
        GeneratorSet::from_images(4, &[&[1, 0, 2, 3], &[0, 1, 3, 2]]).unwrap()
    }

    /// Projection onto the first factor, landing on 2 points.
    fn proj1() -> PermMorphism {
        PermMorphism::table(klein(), vec![p(&[1, 0]), p(&[0, 1])]).unwrap()
    }

    fn proj2() -> PermMorphism {
        PermMorphism::table(klein(), vec![p(&[0, 1]), p(&[1, 0])]).unwrap()
    }

    #[test]
    fn evaluate_kinds() {
        let t = PermMorphism::trivial(4, 3);
        assert!(t.evaluate(&p(&[1, 0, 2, 3])).unwrap().is_identity());
        let prod = tensor(&[proj1(), PermMorphism::trivial(4, 2)]).unwrap();
        assert_eq!(prod.evaluate(&p(&[1, 0, 2, 3])).unwrap(), p(&[1, 0, 2, 3]));
        assert_eq!(prod.evaluate(&p(&[1, 0, 3, 2])).unwrap(), p(&[1, 0, 2, 3]));
        assert!(matches!(
            proj1().evaluate(&p(&[2, 1, 0, 3])),
            Err(Error::EvaluationOutsideSource)
        ));
        assert!(proj1().evaluate(&p(&[0, 1, 2])).is_err());
    }

    #[test]
    fn table_on_nonabelian_source() {
        // sign of S3 into Sym(2)
        let s3 = GeneratorSet::from_images(3, &[&[1, 0, 2], &[1, 2, 0]]).unwrap();
        let sign = PermMorphism::table(s3.clone(), vec![p(&[1, 0]), p(&[0, 1])]).unwrap();
        for g in closure_bruteforce(&s3, 10).unwrap() {
            let img = sign.evaluate(&g).unwrap();
            let odd = g.to_string().split(')').filter(|c| c.split(' ').count() == 2).count() % 2 == 1;
            assert_eq!(!img.is_identity(), odd, "{g}");
        }
        assert_eq!(kernel_order(&sign, &s3).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn ill_defined_table_is_reported() {
        let c2 = GeneratorSet::from_images(2, &[&[1, 0]]).unwrap();
        // (0 1) has order 2 but its "image" has order 3
        let bad = PermMorphism::table(c2, vec![p(&[1, 2, 0])]).unwrap();
        assert!(bad.evaluate(&p(&[1, 0])).is_err());
    }

    #[test]
    fn image_generator_examples() {
        let g = klein();
        let t = image_generators(&PermMorphism::trivial(4, 2), &g).unwrap();
        assert_eq!(t.order(), BigUint::from(1u32));
        let id = image_generators(&PermMorphism::identity_on(&g), &g).unwrap();
        assert_eq!(id.order(), g.order());
        assert_eq!(image_generators(&proj1(), &g).unwrap().order(), BigUint::from(2u32));
    }

    #[test]
    fn kernel_examples() {
        let g = klein();
        assert_eq!(kernel_order(&PermMorphism::trivial(4, 1), &g).unwrap(), BigUint::from(4u32));
        assert_eq!(kernel_order(&PermMorphism::identity_on(&g), &g).unwrap(), BigUint::from(1u32));
        assert_eq!(kernel_order(&proj1(), &g).unwrap(), BigUint::from(2u32));
        assert!(kernel_contains(&proj1(), &g, &Permutation::identity(4)).unwrap());
        assert!(!kernel_contains(&proj1(), &g, &p(&[2, 1, 0, 3])).unwrap());
        assert!(kernel_contains(&proj1(), &g, &g.gens()[1]).unwrap());
        assert!(!kernel_contains(&proj1(), &g, &g.gens()[0]).unwrap());
    }

    #[test]
    fn tensor_examples() {
        let g = klein();
        let single = tensor(&[proj1()]).unwrap();
        for x in closure_bruteforce(&g, 10).unwrap() {
            assert_eq!(single.evaluate(&x).unwrap(), proj1().evaluate(&x).unwrap());
        }
        let with_trivial = tensor(&[proj1(), PermMorphism::trivial(4, 3)]).unwrap();
        assert_eq!(kernel_order(&with_trivial, &g).unwrap(), kernel_order(&proj1(), &g).unwrap());
        let both = tensor(&[proj1(), proj2()]).unwrap();
        assert_eq!(kernel_order(&both, &g).unwrap(), BigUint::from(1u32));
        assert!(matches!(
            tensor(&[proj1(), PermMorphism::trivial(5, 1)]),
            Err(Error::SourceMismatch(4, 5))
        ));
    }

    #[test]
    fn embed_family_examples() {
        let c3 = GeneratorSet::from_images(3, &[&[1, 2, 0]]).unwrap();
        assert_eq!(embed_family(3, std::slice::from_ref(&c3)).unwrap().order(), BigUint::from(3u32));
        let two = embed_family(3, &[c3.clone(), c3.clone()]).unwrap();
        assert_eq!(two.degree(), 6);
        assert_eq!(closure_bruteforce(&two, 100).unwrap().len(), 9);
        let with_empty = embed_family(3, &[c3, GeneratorSet::empty(3)]).unwrap();
        assert_eq!(with_empty.order(), BigUint::from(3u32));
    }

    #[test]
    fn coset_examples() {
        let g = klein();
        let full = MorphismCoset::full(g.clone());
        assert_eq!(coset_size(&full).unwrap(), BigUint::from(4u32));

        let c1 = MorphismCoset::new(g.clone(), proj1(), p(&[1, 0])).unwrap();
        assert_eq!(coset_size(&c1).unwrap(), BigUint::from(2u32));
        let same = coset_intersect(&c1, &full).unwrap();
        assert_eq!(coset_size(&same).unwrap(), BigUint::from(2u32));
        let self_meet = coset_intersect(&c1, &c1).unwrap();
        assert_eq!(coset_size(&self_meet).unwrap(), BigUint::from(2u32));

        let c2 = MorphismCoset::new(g.clone(), proj2(), p(&[1, 0])).unwrap();
        let single = coset_intersect(&c1, &c2).unwrap();
        assert_eq!(coset_size(&single).unwrap(), BigUint::from(1u32));
        assert!(single.contains(&p(&[1, 0, 3, 2])).unwrap());

        let id_value = MorphismCoset::new(g.clone(), proj1(), p(&[0, 1])).unwrap();
        assert!(!coset_is_empty(&id_value).unwrap());
        let trivial_nonid =
            MorphismCoset::new(g.clone(), PermMorphism::trivial(4, 2), p(&[1, 0])).unwrap();
        assert!(coset_is_empty(&trivial_nonid).unwrap());
        assert_eq!(coset_size(&trivial_nonid).unwrap(), BigUint::zero());

        // value moving codomain points outside the projected factor's support
        let wide = PermMorphism::table(g.clone(), vec![p(&[1, 0, 2, 3]), p(&[0, 1, 2, 3])]).unwrap();
        let outside = MorphismCoset::new(g, wide, p(&[0, 1, 3, 2])).unwrap();
        assert!(coset_is_empty(&outside).unwrap());
    }
}
