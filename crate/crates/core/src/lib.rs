pub mod chern;
pub mod grasstower;
pub mod polyring;
pub mod so4pipeline;
pub mod zgraded;
