"""Exact verification engine for Dynkin-pair Nahm sums and 2d CFT characters.

Subpackages:
  qseries   -- exact truncated q-series arithmetic
  dynkin    -- Cartan-matrix catalog and exact rational linear algebra
  nahm      -- generalized Nahm sums by pruned lattice enumeration
  cft       -- truncated character expansions of the referenced 2d CFTs
  analysis  -- Nahm-equation solver, Rogers dilogarithm, central charges
  registry  -- identity database and verification runner
  cli       -- command-line front end
"""

__version__ = "0.1.0"
