# Microstates module
