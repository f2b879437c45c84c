# RQA module
