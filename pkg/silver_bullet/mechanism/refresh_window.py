class RefreshWindow:
    """Attacker activations counted towards the next consumer burst"""

    def __init__(self, window_t: int):
        self.window_t = window_t
        self.activations_in_window = 0
        self.windows_elapsed = 0

    def record_activation(self) -> bool:
        """Count one activation; True when it closes the window and a burst is due"""
        self.activations_in_window += 1
        if self.activations_in_window >= self.window_t:
            self.activations_in_window = 0
            self.windows_elapsed += 1
            return True
        return False

    def remaining(self) -> int:
        """Activations left before the next burst"""
        return self.window_t - self.activations_in_window

    def copy(self) -> "RefreshWindow":
        clone = RefreshWindow(self.window_t)
        clone.activations_in_window = self.activations_in_window
        clone.windows_elapsed = self.windows_elapsed
        return clone
