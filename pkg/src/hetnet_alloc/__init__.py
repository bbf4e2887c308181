"""HetNet uplink PRB allocation with stroke-risk priorities.

Subpackages: :mod:`.risk` (classifier ensemble), :mod:`.milp` (allocation
programs), :mod:`.solver` (LP/MILP engines and the exhaustive oracle) and
:mod:`.harness` (Monte-Carlo campaigns).
"""

from .channel import ChannelRealization, Scenario, ScenarioConfig, generate_scenario, realize_channel
from .status import Status

__version__ = "0.1.0"

__all__ = ["ChannelRealization", "Scenario", "ScenarioConfig", "Status", "generate_scenario",
           "realize_channel"]
