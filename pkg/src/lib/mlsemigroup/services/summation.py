class CompensatedSum:
    """Running Neumaier sum: like ``math.fsum`` but readable after every term."""

    def __init__(self, value: float = 0.0):
        self._sum = float(value)
        self._compensation = 0.0

    def add(self, value: float) -> None:
        total = self._sum + value
        # recover the low-order bits lost in the rounded addition
        if abs(self._sum) >= abs(value):
            self._compensation += (self._sum - total) + value
        else:
            self._compensation += (value - total) + self._sum
        self._sum = total

    @property
    def total(self) -> float:
        return self._sum + self._compensation
