# Signals module
