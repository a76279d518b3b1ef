export class ScriptCrashed extends Error {
  constructor(message: string, readonly stderr: string) {
    super(message);
    this.name = "ScriptCrashed";
  }
}

export class ParseFailure extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ParseFailure";
  }
}

export class LengthMismatch extends Error {
  constructor(message: string) {
    super(message);
    this.name = "LengthMismatch";
  }
}
