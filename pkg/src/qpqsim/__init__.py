"""qpqsim: simulator and analysis toolkit for a device-independent
quantum private query protocol.

The package is organized as one module per protocol concern:

- :mod:`qpqsim.qmath` — exact 2x2 complex linear algebra and state distances
- :mod:`qpqsim.povm` — measurement bases, the three-outcome POVMs, EPR sampling
- :mod:`qpqsim.chsh` — the CHSH self-test (inputs, win statistic, abort rule)
- :mod:`qpqsim.protocol` — the four-phase protocol state machine and queries
- :mod:`qpqsim.adversary` — dishonest-party strategies and their empirical rates
- :mod:`qpqsim.bounds` — closed-form security quantities and the sweep table
- :mod:`qpqsim.cli` — the batch command-line front end
"""

__version__ = "0.1.0"
