from dunkl_intertwining.exceptions import DunklException


class SimulationException(DunklException):
    pass


class InvalidConfigException(SimulationException):
    field: str
    value: object

    def __init__(self, field: str, value: object, reason: str) -> None:
        self.field = field
        self.value = value
        super().__init__(f"invalid {field}={value!r}: {reason}")


class GuardDepthExhaustedException(SimulationException):
    """Step halving reached the guard depth without restoring the particle order."""

    trajectory: int
    time: float

    def __init__(self, trajectory: int, time: float, depth: int) -> None:
        self.trajectory = trajectory
        self.time = time
        super().__init__(f"trajectory {trajectory}: ordering not restored after {depth} halvings at t={time:.6g}")


class ThinningCapException(SimulationException):
    trajectory: int
    time: float

    def __init__(self, trajectory: int, time: float, substeps: int, cap: int) -> None:
        self.trajectory = trajectory
        self.time = time
        super().__init__(f"trajectory {trajectory}: {substeps} jump substeps needed at t={time:.6g}, cap is {cap}")


class GridMismatchException(SimulationException):
    pass
