"""traphub: telemetry server and analytics engine for automated
insect-monitoring device fleets (optical trap counters, tree-vibration
probes, wingbeat recorders, vision traps)."""

__version__ = "0.1.0"
