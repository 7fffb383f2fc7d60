//! Exact computation with Chow rings and augmented Chow rings of matroids:
//! flat lattices with total coatom orderings, nested-monomial arithmetic,
//! a brute-force graded-quotient oracle, Koszul filtrations, and desk-scale
//! Koszulness certificates.

pub mod building;
pub mod chow;
pub mod corpus;
pub mod engine;
pub mod field;
pub mod koszul;
pub mod linalg;
pub mod lattice;
pub mod matroid;
