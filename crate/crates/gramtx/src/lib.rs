//! Std companion of `gramtx-core`: file formats, the HTTP translation
//! backend, whole-project generation and translation runs, analytics
//! reports, the review service and the command-line interface.

pub mod analyze;
pub mod cli;
pub mod config;
pub mod http_backend;
pub mod io;
pub mod pipeline;
pub mod service;
