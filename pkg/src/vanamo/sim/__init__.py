from .bodies import Attachment, Configuration, MovableObject, RobotModel, PICK_BOUND, heading_vector
from .actions import (Action, ActionModel, Occupancy, RejectedAction, Transition, MOTIONS,
                      COSTS, parse_script, format_script, pick)
from .world import WorldState, GoalRegion, InvalidWorld, step
from .sensing import Observation, Hit, observe
from .belief import BeliefGrids, InconsistentObservation, PoseConflict, update_belief, update_pose, apply_effects
