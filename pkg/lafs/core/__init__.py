from .artifact import IndexArtifact, read_artifact, write_artifact
from .far import BasicIndex, build_far
from .fs import FsInstance, fs_oracle, make_instance, nearest_smallers
from .index import LevelAncestorIndex, build_solver
from .multi_level import MultiIndex, build_multi
from .tree import EulerTour, RootedTree, build_euler_tour, parse_tree
from .two_level import TwoLevelIndex, build_two_level
from .types import LocalKind, ReadCounter, Strategy
