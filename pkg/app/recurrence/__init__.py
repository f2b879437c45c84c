# Recurrence module
