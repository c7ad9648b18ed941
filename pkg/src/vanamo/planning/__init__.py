from .search import (SearchMode, SearchNode, Plan, Failure, GoalPredicate, RegionGoal, ConfigGoal, ViewGoal,
                     region_goal, config_goal, view_goal, Heuristic, ChebyshevHeuristic,
                     FieldHeuristic, field_heuristic, path_vision, va_star)
from .lamb import (PlannerConfig, PlanRequest, ManipCandidate, LambPlan, LambPlanner, PlannerStats,
                   Segment, lamb, first_collision, collisions, sample_manip)
from .baselines import (PlannerKind, Planner, Lamb, Vamp, VaStarOnly, ConstrainedNamo, FoNamo,
                        PLANNERS, make_planner, plan_va_star_only, plan_constrained_namo,
                        plan_fo_namo, plan_vamp, plan_lamb)
