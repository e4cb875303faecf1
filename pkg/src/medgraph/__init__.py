"""medgraph: offline-capable medical charting and decision support.

Core modules:
  standards  - reference-table parsing, validation, digests, catalog
  anthro     - decimal z-scores, zone palettes, display formatting
  chart      - declarative chart model and deterministic SVG renderer
  rules      - nutrition program recommendation, rations, line crossings
  records    - patient/visit JSON-lines store
  service    - FastAPI HTTP service over the above
  syncclient - offline-first queue-and-forward sync client
  cli        - operator command line
"""

__version__ = "0.1.0"
