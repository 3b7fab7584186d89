pub mod exact;
pub mod ideals;
pub mod weights;
pub mod expansion;
pub mod geom;
pub mod corpus;
