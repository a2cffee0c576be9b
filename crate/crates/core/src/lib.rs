pub mod composition;
pub mod dynamics;
pub mod error;
pub mod geometric;
pub mod hamspec;
pub mod measures;
pub mod permanent;
pub mod roots;
pub mod state;
pub mod stellar;
