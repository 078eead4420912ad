"""State estimation and opacity verification for discrete event systems observed
by several sites that synchronize with a coordinator."""
from .automaton import Nfa, ReachCache, observable_reach, project, step, unobservable_reach
from .css import Bounds, CssState, CssStructure, build_css, build_feasible_css, size_bounds
from .errors import (CorruptedStateError, DessyncError, FixtureError, ModelError, NotInLanguageError,
                     UndefinedTransitionError, UsageError)
from .estimators import (IObserver, Observer, build_do_observer, build_initial_estimator,
                         build_reversed_observer, current_estimate, initial_estimate, replay_estimates,
                         run_observer)
from .model import Model, fixture, load_model, parse_model
from .opacity import Verdict, verify_csso, verify_iso_via_estimator, verify_iso_via_reversed
from .protocol import ObservationArchitecture, Run, SiState, Site, format_si, parse_si, replay, validate

__version__ = "0.1.0"
