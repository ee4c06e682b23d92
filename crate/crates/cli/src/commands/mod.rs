pub mod data;
pub mod rsa;
pub mod services;
