from combus.audio.wav import UnsupportedFormat, read_wav, write_wav, FRAME_MS, RATE
from combus.audio.vad import VadConfig, detect_speech
from combus.audio.asr import TranscriptLookup
from combus.audio.tts import synthesize
from combus.audio.speaker_id import VoiceRegistry, identify_speaker
