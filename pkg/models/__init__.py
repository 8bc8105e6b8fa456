# Result and input models for amice-kit
