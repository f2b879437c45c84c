# Recurrence entropy toolkit
