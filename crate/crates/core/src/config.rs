//! Engine configuration shared by the CLI and the FFI layer.

use std::path::PathBuf;

use crate::emit::EmitFormat;
use crate::error::{Error, Result};
use crate::symfun::Caps;

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub cap_n: u32,
    pub cap_k: u32,
    pub cache_dir: Option<PathBuf>,
    pub workers: usize,
    pub emit: EmitFormat,
}

impl EngineConfig {
    pub fn new(cap_n: u32, cap_k: u32) -> Result<Self> {
        let c = EngineConfig { cap_n, cap_k, cache_dir: None, workers: 1, emit: EmitFormat::Json };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cap_n < 1 {
            return Err(Error::InvalidArgument("cap_n must be at least 1".into()));
        }
        if self.workers < 1 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn caps(&self) -> Caps {
        Caps::new(self.cap_n, self.cap_k)
    }

    /// Sizes the global worker pool. Only the first call in a process has an
    /// effect; later calls are ignored.
    pub fn install_workers(&self) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(self.workers).build_global() {
            log::debug!("worker pool already initialized: {e}");
        }
    }
}
