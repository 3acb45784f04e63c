"""setscape: unified node/link/contour layout for annotated network modules."""

from importlib import resources

from .errors import (CapacityError, ConfigurationError, GeometryError,
                     ParseError, SetscapeError, SupersededError,
                     UnknownIdError, ValidationError)
from .io import load_module, parse_module, serialize_module
from .model import (ActiveSystem, AnnotatedModule, AnnotationSet, Interaction,
                    MembershipMatrix, Node, assemble_active_system,
                    build_membership_matrix, rank_sets, set_algebra)
from .rsom import (SomConfig, SomGrid, TrainedMap, cosine_distance,
                   derive_config, init_grid, positions, schedule, train)

__version__ = "0.1.0"


def figure2_path():
    """Path to the bundled six-gene demo module."""
    return resources.files("setscape.data") / "figure2.json"


def load_figure2() -> AnnotatedModule:
    """The bundled six-gene demo module (Calm1..Plcb4, 7 edges, 3 sets)."""
    return parse_module(figure2_path().read_text(encoding="utf-8"))
