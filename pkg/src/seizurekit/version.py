"""Format version stamped into model artifacts and run manifests."""

SPEC_VERSION = "1.0"
