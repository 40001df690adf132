//! Bipartite dimer models.
//!
//! Edges are oriented from black to white unless stated otherwise. On a planar drawing the
//! "left" face of an edge is the face on its left in that orientation.

pub mod catalog;
mod city;
mod curve;
mod embedding;
mod graph;
mod height;
mod matching;
mod toric;

pub use city::{city_vertex_weights, ff_weights_to_city, CityWeights};
pub use curve::{curves_equal_mod_units, match_mod_units, CurveVariant, SpectralCurve, MAX_EXPONENT};
pub use embedding::PlanarEmbedding;
pub use graph::{BipartiteGraph, Color, Edge, Vertex, MAX_MATCHING_EDGES};
pub use height::{height_relation_6v_dimer, relative_height, trivalent_height, weight_from_height, FaceHeight};
pub use matching::{config_weight, enumerate_matchings, is_matching, DimerConfig};
pub use toric::{characteristic_polynomial, characteristic_polynomial_with_reference, FundamentalDomain};
