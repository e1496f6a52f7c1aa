pub mod action;
pub mod bundle;
pub mod classify;
mod linalg;
pub mod links;
pub mod polyalg;
